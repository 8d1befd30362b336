"""
Pure-dephasing qubit-mode model.

The joint Hamiltonian sigma_z (x) V with
V = alpha a^dag + alpha* a + beta a^dag a + gamma gives conditional
environment evolutions w0(t) = exp(-i V t) (qubit in |0>, the +1
eigenstate of sigma_z) and w1(t) = exp(+i V t).
"""

import math
from functools import lru_cache
from typing import Iterable, Optional, Tuple

import numpy as np

from qee_witness.errors import ConvergenceError, PreconditionError, UnsupportedParameterError
from qee_witness.physics.fock import (
    HermitianSpectrum,
    Operator,
    annihilation,
    dagger,
    displacement,
    identity,
    number_operator,
)
from qee_witness.schemas.model_schemas import CutoffPolicy, PDParams, ThermalSpec


def _branch_sign(branch: int) -> int:
    if branch not in (0, 1):
        raise PreconditionError(f"branch must be 0 or 1, got {branch}")
    return 1 if branch == 0 else -1


def potential_operator(params: PDParams, dim: int) -> Operator:
    """V = alpha a^dag + alpha* a + beta n + gamma on the truncated space."""
    a = annihilation(dim)
    return (
        params.alpha * dagger(a)
        + np.conj(params.alpha) * a
        + params.beta * number_operator(dim)
        + params.gamma * identity(dim)
    )


@lru_cache(maxsize=8)
def potential_spectrum(params: PDParams, dim: int) -> HermitianSpectrum:
    """Memoized eigendecomposition of V; shared read-only between workers."""
    return HermitianSpectrum(potential_operator(params, dim))


def conditional_evolution(params: PDParams, branch: int, t: float, dim: int) -> Operator:
    """w0(t) = exp(-i V t), w1(t) = exp(+i V t), from the spectrum of V."""
    sign = _branch_sign(branch)
    return potential_spectrum(params, dim).propagator(sign * t)


def conditional_pair(params: PDParams, t: float, dim: int) -> Tuple[Operator, Operator]:
    """(w0(t), w1(t)) from one propagator; w1 is exactly w0^dag."""
    w0 = conditional_evolution(params, 0, t, dim)
    return w0, dagger(w0)


def conditional_evolution_closed_form(params: PDParams, branch: int, t: float, dim: int) -> Operator:
    """
    Independent construction through the displaced-oscillator form
    V = beta D(ab)^dag n D(ab) + (gamma - |alpha|^2/beta), ab = alpha/beta:

        w0(t) = exp(-i shift t) D(ab)^dag exp(-i beta n t) D(ab)

    Raises:
        UnsupportedParameterError: beta == 0
    """
    if params.beta == 0:
        raise UnsupportedParameterError("closed-form evolution requires beta != 0")
    sign = _branch_sign(branch)
    d = displacement(params.alpha_bar, dim)
    phases = np.exp(-1j * sign * params.beta * t * np.arange(dim))
    scalar = np.exp(-1j * sign * params.energy_shift * t)
    return scalar * (dagger(d) * phases) @ d


def conditional_states(params: PDParams, t: float, r0: Operator) -> Tuple[Operator, Operator]:
    """R_ii(t) = w_i(t) R(0) w_i(t)^dag for i = 0, 1."""
    w0, w1 = conditional_pair(params, t, r0.shape[0])
    return w0 @ r0 @ dagger(w0), w1 @ r0 @ dagger(w1)


def coherent_excursion(params: PDParams, t: float) -> float:
    """Mean photon number 4|alpha/beta|^2 sin^2(beta t / 2) reached from the vacuum."""
    return 4.0 * abs(params.alpha_bar) ** 2 * math.sin(params.beta * t / 2.0) ** 2


def thermal_tail_mass(spec: ThermalSpec, dim: int) -> float:
    """Gibbs weight q^dim discarded by truncating at dim levels."""
    return spec.ratio ** dim


def thermal_state(spec: ThermalSpec, dim: int, policy: Optional[CutoffPolicy] = None) -> Operator:
    """
    Diagonal Gibbs state p_n ~ exp(-n/theta), normalized on the truncated
    space; theta = 0 gives the vacuum projector.

    Raises:
        ConvergenceError: policy given and the discarded tail exceeds epsilon
    """
    if policy is not None:
        tail = thermal_tail_mass(spec, dim)
        if tail > policy.epsilon:
            raise ConvergenceError(
                f"thermal tail mass {tail:.3e} at dim={dim} exceeds epsilon={policy.epsilon:.0e}",
                achieved_residual=tail,
                dim=dim,
            )
    populations = spec.ratio ** np.arange(dim, dtype=np.float64) if spec.theta > 0 else np.eye(1, dim)[0]
    populations = populations / populations.sum()
    return np.diag(populations).astype(np.complex128)


def minimal_thermal_dim(spec: ThermalSpec, policy: CutoffPolicy) -> int:
    """Smallest scheduled dimension whose thermal tail is below epsilon."""
    for dim in policy.candidate_dims():
        if thermal_tail_mass(spec, dim) <= policy.epsilon:
            return dim
    tail = thermal_tail_mass(spec, policy.n_max)
    raise ConvergenceError(
        f"thermal state at theta={spec.theta} needs more than n_max={policy.n_max} levels",
        achieved_residual=tail,
        dim=policy.n_max,
    )


def coherence_trace(params: PDParams, r: Operator, tau_grid: Iterable[float]) -> np.ndarray:
    """
    Tr[w0(tau) R w1(tau)^dag] = Tr[R exp(-2i V tau)] on a grid of times,
    from the populations of R in the eigenbasis of V.
    """
    tau = np.asarray(tuple(tau_grid), dtype=np.float64)
    spectrum = potential_spectrum(params, r.shape[0])
    weights = spectrum.diagonal_weights(r)
    values = np.exp(-2j * np.outer(tau, spectrum.eigenvalues)) @ weights
    # both unitaries are the identity at tau = 0 and Tr R = 1
    values[tau == 0.0] = 1.0
    return values
