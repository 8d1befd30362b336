"""
Numerical core: Fock-space algebra, the pure-dephasing model, the
detection protocol and parameter sweeps.
"""

from .cutoff import CutoffChoice, choose_cutoff, select_cutoff
from .fock import (
    annihilation,
    displacement,
    expm_hermitian,
    negativity,
    partial_trace_env,
    partial_transpose_qubit,
    trace_distance,
)
from .model import (
    conditional_evolution,
    conditional_evolution_closed_form,
    potential_operator,
    thermal_state,
)
from .sweep import convergence_report, run_sweep
from .witness import (
    evaluate_protocol,
    joint_negativity,
    measurement_coherence,
    prepare_conditional_environment,
    separability_gap,
    witness_curve,
    witness_verdict,
)

__all__ = [
    # Fock algebra
    "annihilation",
    "displacement",
    "expm_hermitian",
    "trace_distance",
    "partial_transpose_qubit",
    "negativity",
    "partial_trace_env",
    # Model
    "potential_operator",
    "conditional_evolution",
    "conditional_evolution_closed_form",
    "thermal_state",
    "choose_cutoff",
    "select_cutoff",
    "CutoffChoice",
    # Protocol
    "prepare_conditional_environment",
    "measurement_coherence",
    "witness_curve",
    "separability_gap",
    "joint_negativity",
    "witness_verdict",
    "evaluate_protocol",
    # Sweeps
    "run_sweep",
    "convergence_report",
]
