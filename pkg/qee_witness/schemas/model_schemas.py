"""
Pydantic models for the pure-dephasing interaction and its environment.
Units: hbar = 1, energies in units of the dispersive shift beta.
"""

import math
from typing import ClassVar, List

from pydantic import BaseModel, ConfigDict, Field, field_validator

from qee_witness.errors import UnsupportedParameterError


class PDParams(BaseModel):
    """
    Interaction triple of V = alpha a^dag + alpha* a + beta a^dag a + gamma.

    alpha is the spin-boson coupling, beta the dispersive shift and gamma
    the offset coming from the free qubit Hamiltonian.
    """
    model_config = ConfigDict(frozen=True)

    alpha: complex = Field(default=0j, description="Spin-boson coupling constant")
    beta: float = Field(default=1.0, description="Dispersive shift (sets the frequency unit)")
    gamma: float = Field(default=0.0, description="Qubit free-Hamiltonian offset")

    @field_validator("alpha")
    @classmethod
    def validate_alpha_finite(cls, v: complex) -> complex:
        """Reject nan/inf couplings."""
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ValueError("alpha must be finite")
        return complex(v)

    @field_validator("beta", "gamma")
    @classmethod
    def validate_finite(cls, v: float) -> float:
        """Reject nan/inf parameters."""
        if not math.isfinite(v):
            raise ValueError("parameter must be finite")
        return v

    @property
    def alpha_bar(self) -> complex:
        """Displacement amplitude alpha / beta of the closed-form factorization."""
        if self.beta == 0:
            raise UnsupportedParameterError("alpha/beta is undefined for beta = 0")
        return self.alpha / self.beta

    @property
    def energy_shift(self) -> float:
        """Scalar offset gamma - |alpha|^2 / beta of the displaced number operator."""
        if self.beta == 0:
            raise UnsupportedParameterError("energy shift is undefined for beta = 0")
        return self.gamma - abs(self.alpha) ** 2 / self.beta

    @property
    def period(self) -> float:
        """Recurrence time 2 pi / beta of the conditional environment states."""
        if self.beta == 0:
            raise UnsupportedParameterError("no recurrence for beta = 0")
        return 2.0 * math.pi / abs(self.beta)


class ThermalSpec(BaseModel):
    """
    Gibbs state of H0 = Omega a^dag a at dimensionless temperature
    theta = k_B T / (hbar Omega).
    """
    model_config = ConfigDict(frozen=True)

    theta: float = Field(default=0.0, ge=0.0, description="Dimensionless temperature")

    @field_validator("theta")
    @classmethod
    def validate_theta_finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("theta must be finite")
        return v

    @property
    def ratio(self) -> float:
        """Geometric ratio q = exp(-1/theta) of successive Fock populations."""
        if self.theta == 0:
            return 0.0
        return math.exp(-1.0 / self.theta)

    @property
    def mean_occupation(self) -> float:
        """Bose-Einstein occupation 1 / (e^{1/theta} - 1)."""
        if self.theta == 0:
            return 0.0
        return 1.0 / math.expm1(1.0 / self.theta)


class CutoffPolicy(BaseModel):
    """Adaptive Fock cutoff: start at 8, double until observables settle."""
    model_config = ConfigDict(frozen=True)

    START_DIM: ClassVar[int] = 8
    GROWTH_FACTOR: ClassVar[int] = 2

    epsilon: float = Field(
        default=1e-10,
        gt=0.0,
        le=1e-4,
        description="Tail-mass and observable-change tolerance",
    )
    n_max: int = Field(default=512, ge=8, description="Hard ceiling on the Fock dimension")

    def candidate_dims(self) -> List[int]:
        """Geometric schedule 8, 16, 32, ... up to n_max."""
        dims = []
        dim = self.START_DIM
        while dim <= self.n_max:
            dims.append(dim)
            dim *= self.GROWTH_FACTOR
        return dims
