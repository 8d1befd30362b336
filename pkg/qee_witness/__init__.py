"""
qee-witness - qubit-environment entanglement witness simulator

Simulates a qubit coupled to a single bosonic mode under pure-dephasing
evolutions, runs the two-stage tunable-interaction detection protocol and
cross-validates the witness against the exact separability criterion.
"""

__version__ = "0.1.0"
