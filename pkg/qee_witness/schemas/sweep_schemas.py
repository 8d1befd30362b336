"""
Pydantic models for parameter sweeps and convergence diagnostics.
"""

import math
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from qee_witness.schemas.protocol_schemas import ProtocolConfig, WitnessCurve


class SweepSpec(BaseModel):
    """
    Grid of protocol runs: preparation times x temperatures, optionally
    crossed with preparation and measurement couplings.
    """
    model_config = ConfigDict(frozen=True)

    base: ProtocolConfig = Field(..., description="Template for every row")
    t_values: Tuple[float, ...] = Field(..., description="Preparation times")
    theta_values: Tuple[float, ...] = Field(..., description="Dimensionless temperatures")
    prep_alpha_values: Tuple[complex, ...] = Field(default=(), description="Optional prep alpha axis")
    meas_alpha_values: Tuple[complex, ...] = Field(default=(), description="Optional meas alpha axis")
    parallelism: int = Field(default=0, ge=0, description="Worker hint (0 = settings default)")

    @field_validator("t_values", "theta_values")
    @classmethod
    def validate_axis(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        """Nonempty, finite, non-negative and free of duplicates."""
        if len(v) == 0:
            raise ValueError("sweep axis must be nonempty")
        if not all(math.isfinite(x) and x >= 0 for x in v):
            raise ValueError("sweep axis values must be finite and non-negative")
        if len(set(v)) != len(v):
            raise ValueError("sweep axis contains duplicate values")
        return v

    @field_validator("prep_alpha_values", "meas_alpha_values")
    @classmethod
    def validate_alpha_axis(cls, v: Tuple[complex, ...]) -> Tuple[complex, ...]:
        if not all(math.isfinite(z.real) and math.isfinite(z.imag) for z in v):
            raise ValueError("alpha values must be finite")
        if len(set(v)) != len(v):
            raise ValueError("alpha axis contains duplicate values")
        return v

    @property
    def has_override_axes(self) -> bool:
        return bool(self.prep_alpha_values or self.meas_alpha_values)

    @property
    def row_count(self) -> int:
        return (
            max(1, len(self.prep_alpha_values))
            * max(1, len(self.meas_alpha_values))
            * len(self.theta_values)
            * len(self.t_values)
        )


class SweepRow(BaseModel):
    """One (t, theta) cell of a sweep."""
    model_config = ConfigDict(frozen=True)

    t: float
    theta: float
    prep_alpha: complex
    meas_alpha: complex
    max_abs_re: float = Field(..., description="max_tau |Re signal|")
    max_abs_im: float = Field(..., description="max_tau |Im signal|")
    separability_gap: float
    negativity: Optional[float] = Field(None, description="None when the cross-check is off")
    dim_used: int
    residual: float = Field(..., description="Observable change under one cutoff doubling")


class SweepResult(BaseModel):
    """Rows ordered by (prep alpha, meas alpha, theta, t)."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rows: Tuple[SweepRow, ...]
    curves: Optional[Tuple[WitnessCurve, ...]] = None
    has_override_axes: bool = False


class ConvergenceRow(BaseModel):
    """Cutoff diagnostics for one sweep cell; failures are recorded, not raised."""
    model_config = ConfigDict(frozen=True)

    t: float
    theta: float
    prep_alpha: complex
    meas_alpha: complex
    dim_used: Optional[int] = None
    residual: Optional[float] = None
    wall_time: float = 0.0
    converged: bool
    message: Optional[str] = None


class ConvergenceReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: Tuple[ConvergenceRow, ...]
    epsilon: float
    has_override_axes: bool = False

    @property
    def all_converged(self) -> bool:
        return all(row.converged for row in self.rows)
