"""
Adaptive Fock cutoff.

Starting from the smallest scheduled dimension that holds the thermal
state, the dimension is doubled until every probed observable (both
coherence curves and the separability gap at each probed preparation time)
changes by less than epsilon under one more doubling. The Gibbs weight
discarded at the accepted dimension counts against the same epsilon.
"""

import math
from typing import NamedTuple, Optional, Sequence

import numpy as np
import structlog

from qee_witness.errors import ConvergenceError
from qee_witness.physics.fock import trace_distance
from qee_witness.physics.model import (
    coherence_trace,
    conditional_states,
    minimal_thermal_dim,
    thermal_state,
    thermal_tail_mass,
)
from qee_witness.schemas.model_schemas import CutoffPolicy, PDParams, ThermalSpec

logger = structlog.get_logger(__name__)

DEFAULT_T_PROBES = 9
DEFAULT_TAU_PROBES = 33


class CutoffChoice(NamedTuple):
    """Accepted dimension and the observable change under one doubling."""
    dim: int
    residual: float


def probe_observables(
    prep: PDParams,
    meas: PDParams,
    spec: ThermalSpec,
    dim: int,
    t_values: Sequence[float],
    tau_grid: Sequence[float],
) -> np.ndarray:
    """
    Reported observables at one dimension, flattened: for each t, the
    unsigned coherence traces of both branches and the trace distance.
    """
    r0 = thermal_state(spec, dim)
    parts = []
    for t in t_values:
        r00, r11 = conditional_states(prep, t, r0)
        parts.append(0.5 * coherence_trace(meas, r00, tau_grid))
        parts.append(0.5 * coherence_trace(meas, r11, tau_grid))
        parts.append(np.array([trace_distance(r00, r11)], dtype=np.complex128))
    return np.concatenate(parts)


def select_cutoff(
    params_prep: PDParams,
    params_meas: PDParams,
    spec: ThermalSpec,
    t_max: float,
    policy: CutoffPolicy,
    t_values: Optional[Sequence[float]] = None,
    tau_grid: Optional[Sequence[float]] = None,
) -> CutoffChoice:
    """
    Smallest scheduled dimension whose observables move by less than
    policy.epsilon when the dimension is doubled, counting the discarded
    thermal tail in the residual.

    Raises:
        ConvergenceError: no dimension up to n_max/2 passes; carries the
            best residual reached
    """
    if t_values is None:
        t_values = tuple(np.linspace(0.0, t_max, DEFAULT_T_PROBES)) if t_max > 0 else (0.0,)
    if tau_grid is None:
        tau_grid = tuple(np.linspace(0.0, 2.0 * math.pi / abs(params_meas.beta), DEFAULT_TAU_PROBES))

    dim = minimal_thermal_dim(spec, policy)
    best = math.inf
    current = probe_observables(params_prep, params_meas, spec, dim, t_values, tau_grid)
    while dim * policy.GROWTH_FACTOR <= policy.n_max:
        doubled_dim = dim * policy.GROWTH_FACTOR
        doubled = probe_observables(params_prep, params_meas, spec, doubled_dim, t_values, tau_grid)
        residual = float(np.max(np.abs(doubled - current))) + thermal_tail_mass(spec, dim)
        best = min(best, residual)
        logger.debug("cutoff_probe", dim=dim, residual=residual, theta=spec.theta)
        if residual < policy.epsilon:
            logger.info("cutoff_selected", dim=dim, residual=residual, theta=spec.theta)
            return CutoffChoice(dim=dim, residual=residual)
        dim, current = doubled_dim, doubled

    raise ConvergenceError(
        f"Fock cutoff not converged up to n_max={policy.n_max} "
        f"(best residual {best:.3e}, epsilon {policy.epsilon:.0e})",
        achieved_residual=best,
        dim=dim,
    )


def choose_cutoff(
    params_prep: PDParams,
    params_meas: PDParams,
    spec: ThermalSpec,
    t_max: float,
    policy: CutoffPolicy,
    t_values: Optional[Sequence[float]] = None,
    tau_grid: Optional[Sequence[float]] = None,
) -> int:
    """Dimension part of select_cutoff."""
    return select_cutoff(
        params_prep, params_meas, spec, t_max, policy, t_values=t_values, tau_grid=tau_grid
    ).dim
