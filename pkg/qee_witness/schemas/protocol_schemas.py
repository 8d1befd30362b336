"""
Pydantic models for the two-stage detection protocol and its outputs.
"""

import math
from typing import Any, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from qee_witness.schemas.model_schemas import CutoffPolicy, PDParams, ThermalSpec

DEFAULT_TAU_POINTS = 400
DEFAULT_THRESHOLD = 1e-6


def default_tau_grid(beta: float, points: int = DEFAULT_TAU_POINTS) -> Tuple[float, ...]:
    """Uniform samples covering one measurement period, beta*tau in [0, 2 pi]."""
    return tuple(float(x) for x in np.linspace(0.0, 2.0 * math.pi / abs(beta), points))


class ProtocolConfig(BaseModel):
    """
    A single run of the detection circuit: preparation with `prep` for time t,
    Hadamard, then measurement with `meas` sampled on tau_grid.
    """
    model_config = ConfigDict(frozen=True)

    prep: PDParams = Field(default_factory=PDParams, description="Preparation-phase interaction")
    meas: PDParams = Field(default_factory=PDParams, description="Measurement-phase interaction")
    t: float = Field(default=0.0, ge=0.0, description="Preparation time (units 1/beta)")
    tau_grid: Tuple[float, ...] = Field(..., description="Measurement times, strictly increasing")
    thermal: ThermalSpec = Field(default_factory=ThermalSpec, description="Initial Gibbs state")
    cutoff: CutoffPolicy = Field(default_factory=CutoffPolicy, description="Fock cutoff policy")
    witness_threshold: float = Field(default=DEFAULT_THRESHOLD, gt=0.0)
    amplitude_a: complex = Field(default=complex(1 / math.sqrt(2)), description="Cross-check |0> amplitude")
    amplitude_b: complex = Field(default=complex(1 / math.sqrt(2)), description="Cross-check |1> amplitude")

    @model_validator(mode="before")
    @classmethod
    def fill_default_tau_grid(cls, data: Any) -> Any:
        """Default tau grid: 400 points over one period of the measurement dynamics."""
        if isinstance(data, dict) and data.get("tau_grid") is None:
            meas = data.get("meas")
            if isinstance(meas, dict):
                beta = meas.get("beta", 1.0)
            elif isinstance(meas, PDParams):
                beta = meas.beta
            else:
                beta = 1.0
            if beta:
                data = {**data, "tau_grid": default_tau_grid(beta)}
        return data

    @field_validator("t")
    @classmethod
    def validate_t_finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("t must be finite")
        return v

    @field_validator("tau_grid")
    @classmethod
    def validate_tau_grid(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        """Nonempty, finite and strictly increasing."""
        if len(v) == 0:
            raise ValueError("tau grid must be nonempty")
        if not all(math.isfinite(x) for x in v):
            raise ValueError("tau grid values must be finite")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("tau grid must be strictly increasing")
        return v

    @model_validator(mode="after")
    def validate_positive_beta(self) -> "ProtocolConfig":
        if self.prep.beta <= 0 or self.meas.beta <= 0:
            raise ValueError("beta must be positive in both phases")
        return self

    def replace(self, **changes: Any) -> "ProtocolConfig":
        """Copy with changes, re-running validation."""
        return ProtocolConfig.model_validate({**dict(self), **changes})


class WitnessCurve(BaseModel):
    """
    Sampled coherence curves of the measurement stage.

    coh0/coh1 are sign-corrected for the Hadamard (coh1 carries the minus
    sign), so signal = coh0 + coh1 is the coherence difference for both
    branches started in |+>.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    tau: np.ndarray
    coh0: np.ndarray
    coh1: np.ndarray
    signal: np.ndarray
    dim: int = Field(..., ge=2, description="Fock dimension used")

    @property
    def unsigned0(self) -> np.ndarray:
        """(1/2) Tr[w'0 R00 w'1^dag] without the Hadamard sign."""
        return self.coh0

    @property
    def unsigned1(self) -> np.ndarray:
        """(1/2) Tr[w'0 R11 w'1^dag] without the Hadamard sign."""
        return -self.coh1

    @property
    def max_abs_signal(self) -> float:
        return float(np.max(np.abs(self.signal)))

    @property
    def argmax_tau(self) -> float:
        return float(self.tau[int(np.argmax(np.abs(self.signal)))])

    @property
    def max_abs_re(self) -> float:
        return float(np.max(np.abs(self.signal.real)))

    @property
    def max_abs_im(self) -> float:
        return float(np.max(np.abs(self.signal.imag)))


class WitnessVerdict(BaseModel):
    """Witness outcome together with the exact criteria it is checked against."""
    model_config = ConfigDict(frozen=True)

    witnessed: bool
    max_abs_signal: float
    separability_gap: float
    negativity_value: Optional[float] = Field(None, description="None when the cross-check was skipped")
    consistency: bool
    threshold: float = DEFAULT_THRESHOLD
