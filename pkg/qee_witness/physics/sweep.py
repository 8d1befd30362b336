"""
Parameter sweeps over preparation time, temperature and couplings.

Rows are pure tasks run on a thread pool (the heavy LAPACK calls release
the GIL). The Fock cutoff is chosen once per (prep alpha, meas alpha,
theta) group, certified on exactly the t values and tau grid the group
reports, and every row re-checks its own residual under one doubling.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, NamedTuple, Tuple, Union

import numpy as np
import structlog

from qee_witness.config import get_settings
from qee_witness.errors import ConvergenceError
from qee_witness.physics.cutoff import CutoffChoice, select_cutoff
from qee_witness.physics.model import potential_spectrum, thermal_state, thermal_tail_mass
from qee_witness.physics.witness import joint_negativity, separability_gap, witness_curve
from qee_witness.schemas.model_schemas import ThermalSpec
from qee_witness.schemas.protocol_schemas import ProtocolConfig, WitnessCurve
from qee_witness.schemas.sweep_schemas import (
    ConvergenceReport,
    ConvergenceRow,
    SweepResult,
    SweepRow,
    SweepSpec,
)

logger = structlog.get_logger(__name__)

GroupKey = Tuple[int, int, float]


class SweepCell(NamedTuple):
    """Coordinates of one row; the indices keep override axes in their listed order."""
    prep_index: int
    meas_index: int
    prep_alpha: complex
    meas_alpha: complex
    theta: float
    t: float

    @property
    def group(self) -> GroupKey:
        return (self.prep_index, self.meas_index, self.theta)

    @property
    def sort_key(self) -> Tuple[int, int, float, float]:
        return (self.prep_index, self.meas_index, self.theta, self.t)


class RowOutcome(NamedTuple):
    row: SweepRow
    curve: WitnessCurve
    wall_time: float


def sweep_cells(spec: SweepSpec) -> List[SweepCell]:
    """All rows of the sweep, ordered by (prep alpha, meas alpha, theta, t)."""
    prep_alphas = spec.prep_alpha_values or (spec.base.prep.alpha,)
    meas_alphas = spec.meas_alpha_values or (spec.base.meas.alpha,)
    return [
        SweepCell(pi, mi, pa, ma, theta, t)
        for pi, pa in enumerate(prep_alphas)
        for mi, ma in enumerate(meas_alphas)
        for theta in sorted(spec.theta_values)
        for t in sorted(spec.t_values)
    ]


def cell_config(spec: SweepSpec, cell: SweepCell) -> ProtocolConfig:
    """Protocol config of a single row."""
    base = spec.base
    return base.replace(
        prep=base.prep.model_copy(update={"alpha": cell.prep_alpha}),
        meas=base.meas.model_copy(update={"alpha": cell.meas_alpha}),
        t=cell.t,
        thermal=ThermalSpec(theta=cell.theta),
    )


def _select_group_cutoff(spec: SweepSpec, cell: SweepCell) -> Union[CutoffChoice, ConvergenceError]:
    config = cell_config(spec, cell)
    t_values = tuple(sorted(spec.t_values))
    try:
        return select_cutoff(
            config.prep,
            config.meas,
            config.thermal,
            max(t_values),
            config.cutoff,
            t_values=t_values,
            tau_grid=config.tau_grid,
        )
    except ConvergenceError as e:
        return e


def evaluate_row(config: ProtocolConfig, dim: int, include_negativity: bool) -> RowOutcome:
    """
    Witness curve at dim plus its residual: the largest change of either
    coherence curve or of the separability gap when dim is doubled, plus
    the Gibbs weight discarded at dim.
    """
    started = time.perf_counter()
    curve = witness_curve(config, dim=dim)
    doubled = witness_curve(config, dim=2 * dim)

    r0 = thermal_state(config.thermal, dim)
    gap = separability_gap(config.prep, config.t, r0)
    gap_doubled = separability_gap(config.prep, config.t, thermal_state(config.thermal, 2 * dim))
    residual = max(
        float(np.max(np.abs(doubled.coh0 - curve.coh0))),
        float(np.max(np.abs(doubled.coh1 - curve.coh1))),
        abs(gap_doubled - gap),
    ) + thermal_tail_mass(config.thermal, dim)
    neg = None
    if include_negativity:
        neg = joint_negativity(config.prep, config.t, config.amplitude_a, config.amplitude_b, r0)

    row = SweepRow(
        t=config.t,
        theta=config.thermal.theta,
        prep_alpha=config.prep.alpha,
        meas_alpha=config.meas.alpha,
        max_abs_re=curve.max_abs_re,
        max_abs_im=curve.max_abs_im,
        separability_gap=gap,
        negativity=neg,
        dim_used=dim,
        residual=residual,
    )
    wall_time = time.perf_counter() - started
    logger.info("sweep_row_done", t=config.t, theta=config.thermal.theta, dim=dim,
                residual=residual, wall_time=round(wall_time, 4))
    return RowOutcome(row=row, curve=curve, wall_time=wall_time)


def _group_choices(
    spec: SweepSpec,
    cells: List[SweepCell],
    pool: ThreadPoolExecutor,
) -> Dict[GroupKey, Union[CutoffChoice, ConvergenceError]]:
    representatives: Dict[GroupKey, SweepCell] = {}
    for cell in cells:
        representatives.setdefault(cell.group, cell)
    keys = list(representatives)
    results = pool.map(lambda key: _select_group_cutoff(spec, representatives[key]), keys)
    return dict(zip(keys, results))


def run_sweep(spec: SweepSpec, include_negativity: bool = False, keep_curves: bool = False) -> SweepResult:
    """
    Evaluate every row. Fail-fast: any group or row that misses the cutoff
    tolerance aborts the sweep with the failing (t, theta) pairs.

    Raises:
        ConvergenceError: with failing_rows populated
    """
    cells = sweep_cells(spec)
    workers = get_settings().worker_count(spec.parallelism)
    epsilon = spec.base.cutoff.epsilon
    logger.info("sweep_started", rows=len(cells), workers=workers)

    try:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            choices = _group_choices(spec, cells, pool)
            failed = [c for c in cells if isinstance(choices[c.group], ConvergenceError)]
            if failed:
                first = choices[failed[0].group]
                raise ConvergenceError(
                    f"cutoff selection failed for {len(failed)} row(s): {first}",
                    achieved_residual=first.achieved_residual,
                    dim=first.dim,
                    failing_rows=[(c.t, c.theta) for c in failed],
                )

            outcomes = list(pool.map(
                lambda c: evaluate_row(cell_config(spec, c), choices[c.group].dim, include_negativity),
                cells,
            ))
    finally:
        potential_spectrum.cache_clear()

    ordered = sorted(zip(cells, outcomes), key=lambda pair: pair[0].sort_key)
    unconverged = [(c.t, c.theta, o.row.residual) for c, o in ordered if not o.row.residual < epsilon]
    if unconverged:
        worst = max(r for _, _, r in unconverged)
        raise ConvergenceError(
            f"{len(unconverged)} row(s) exceed residual tolerance {epsilon:.0e} (worst {worst:.3e})",
            achieved_residual=worst,
            failing_rows=[(t, theta) for t, theta, _ in unconverged],
        )

    return SweepResult(
        rows=tuple(o.row for _, o in ordered),
        curves=tuple(o.curve for _, o in ordered) if keep_curves else None,
        has_override_axes=spec.has_override_axes,
    )


def _report_row(spec: SweepSpec, cell: SweepCell, choice: Union[CutoffChoice, ConvergenceError]) -> ConvergenceRow:
    common = dict(t=cell.t, theta=cell.theta, prep_alpha=cell.prep_alpha, meas_alpha=cell.meas_alpha)
    if isinstance(choice, ConvergenceError):
        return ConvergenceRow(
            **common,
            dim_used=choice.dim,
            residual=choice.achieved_residual,
            converged=False,
            message=str(choice),
        )
    try:
        outcome = evaluate_row(cell_config(spec, cell), choice.dim, include_negativity=False)
    except ConvergenceError as e:
        return ConvergenceRow(**common, dim_used=choice.dim, converged=False, message=str(e))
    residual = outcome.row.residual
    converged = residual < spec.base.cutoff.epsilon
    return ConvergenceRow(
        **common,
        dim_used=choice.dim,
        residual=residual,
        wall_time=outcome.wall_time,
        converged=converged,
        message=None if converged else f"residual {residual:.3e} above epsilon",
    )


def convergence_report(spec: SweepSpec) -> ConvergenceReport:
    """Per-row cutoff diagnostics. Collect-all: failures become rows, never exceptions."""
    cells = sweep_cells(spec)
    workers = get_settings().worker_count(spec.parallelism)

    try:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            choices = _group_choices(spec, cells, pool)
            rows = list(pool.map(lambda c: _report_row(spec, c, choices[c.group]), cells))
    finally:
        potential_spectrum.cache_clear()

    failures = sum(1 for r in rows if not r.converged)
    if failures:
        logger.warning("convergence_failures", failed=failures, total=len(rows))
    return ConvergenceReport(
        rows=tuple(rows),
        epsilon=spec.base.cutoff.epsilon,
        has_override_axes=spec.has_override_axes,
    )

