"""
Pydantic schemas for parameters, protocol configuration and results.
"""

from .model_schemas import CutoffPolicy, PDParams, ThermalSpec
from .protocol_schemas import (
    DEFAULT_TAU_POINTS,
    DEFAULT_THRESHOLD,
    ProtocolConfig,
    WitnessCurve,
    WitnessVerdict,
    default_tau_grid,
)
from .run_schemas import RunConfig, RunMode
from .sweep_schemas import (
    ConvergenceReport,
    ConvergenceRow,
    SweepResult,
    SweepRow,
    SweepSpec,
)

__all__ = [
    # Model
    "PDParams",
    "ThermalSpec",
    "CutoffPolicy",
    # Protocol
    "ProtocolConfig",
    "WitnessCurve",
    "WitnessVerdict",
    "default_tau_grid",
    "DEFAULT_TAU_POINTS",
    "DEFAULT_THRESHOLD",
    # Sweeps
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "ConvergenceRow",
    "ConvergenceReport",
    # CLI
    "RunConfig",
    "RunMode",
]
