"""
Exception hierarchy shared by the library and the CLI.
"""

from typing import List, Optional, Tuple


class QEEWitnessError(Exception):
    """Base class for all errors raised by qee_witness."""
    pass


class InvalidDimensionError(QEEWitnessError, ValueError):
    """Fock dimension too small or operand dimensions do not match."""
    pass


class ContractViolationError(QEEWitnessError, ValueError):
    """An operator predicate (Hermiticity, unit trace, positivity) failed."""
    pass


class UnsupportedParameterError(QEEWitnessError, ValueError):
    """Parameters outside the supported model class (e.g. beta = 0)."""
    pass


class PreconditionError(QEEWitnessError, ValueError):
    """Inputs violate an operation precondition."""
    pass


class ConvergenceError(QEEWitnessError):
    """
    The Fock cutoff policy could not be satisfied.

    Carries the best residual reached and, for sweeps, the (t, theta)
    rows that failed.
    """

    def __init__(
        self,
        message: str,
        achieved_residual: Optional[float] = None,
        dim: Optional[int] = None,
        failing_rows: Optional[List[Tuple[float, float]]] = None,
    ):
        super().__init__(message)
        self.achieved_residual = achieved_residual
        self.dim = dim
        self.failing_rows = failing_rows or []


class ConfigParseError(QEEWitnessError):
    """Syntax error in a config file."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ConfigDomainError(QEEWitnessError, ValueError):
    """Config parsed cleanly but violates a domain invariant."""

    def __init__(self, message: str, key: Optional[str] = None):
        if key is not None:
            message = f"{key}: {message}"
        super().__init__(message)
        self.key = key


class OutputError(QEEWitnessError):
    """Writing CSV or verdict output failed."""
    pass
