"""
Two-stage detection circuit.

Preparation: qubit in pointer state |i>, environment R(0), interaction
`prep` for time t, leaving the environment in R_ii(t). A Hadamard then
puts the qubit in (|0> +/- |1>)/sqrt(2) and the interaction is switched to
`meas`. The qubit coherence measured after a further time tau is

    rho01^(i)(tau) = +/- (1/2) Tr[w'0(tau) R_ii(t) w'1(tau)^dag]

and any difference between the two (sign-corrected) curves certifies that
the preparation evolution entangles the qubit with the mode.
"""

from typing import Iterable, Optional, Tuple

import numpy as np
import structlog

from qee_witness.errors import PreconditionError
from qee_witness.physics.cutoff import choose_cutoff
from qee_witness.physics.fock import (
    Operator,
    dagger,
    negativity,
    pure_qubit,
    trace_distance,
    validate_density_operator,
)
from qee_witness.physics.model import (
    conditional_evolution,
    conditional_pair,
    coherence_trace,
    conditional_states,
    thermal_state,
)
from qee_witness.schemas.model_schemas import PDParams
from qee_witness.schemas.protocol_schemas import ProtocolConfig, WitnessCurve, WitnessVerdict

logger = structlog.get_logger(__name__)

AMPLITUDE_TOL = 1e-12


def prepare_conditional_environment(prep: PDParams, branch: int, t: float, r0: Operator) -> Operator:
    """R_ii(t) = w_i(t) R(0) w_i(t)^dag for the qubit held in pointer state |branch>."""
    validate_density_operator(r0)
    w = conditional_evolution(prep, branch, t, r0.shape[0])
    return w @ r0 @ dagger(w)


def measurement_coherence_curve(meas: PDParams, r: Operator, tau_grid: Iterable[float]) -> np.ndarray:
    """
    Unsigned coherence (1/2) Tr[w'0(tau) R w'1(tau)^dag] on a tau grid.

    Since w'1^dag = w'0 the trace is Tr[R exp(-2i V' tau)], evaluated from
    the populations of R in the eigenbasis of V'.
    """
    return 0.5 * coherence_trace(meas, r, tau_grid)


def measurement_coherence(meas: PDParams, r: Operator, tau: float) -> complex:
    """Unsigned coherence at a single measurement time."""
    return complex(measurement_coherence_curve(meas, r, (tau,))[0])


def witness_curve(config: ProtocolConfig, dim: Optional[int] = None) -> WitnessCurve:
    """
    Coherence curves of both preparation branches and their signal.

    coh0 = +m(R00), coh1 = -m(R11) (Hadamard sign on branch 1) and
    signal = coh0 + coh1. Without an explicit dim the cutoff is chosen by
    the adaptive policy for this single configuration.
    """
    if dim is None:
        dim = choose_cutoff(
            config.prep,
            config.meas,
            config.thermal,
            config.t,
            config.cutoff,
            t_values=(config.t,),
            tau_grid=config.tau_grid,
        )

    r0 = thermal_state(config.thermal, dim)
    r00, r11 = conditional_states(config.prep, config.t, r0)
    coh0 = measurement_coherence_curve(config.meas, r00, config.tau_grid)
    coh1 = -measurement_coherence_curve(config.meas, r11, config.tau_grid)
    tau = np.asarray(config.tau_grid, dtype=np.float64)

    for arr in (tau, coh0, coh1):
        arr.flags.writeable = False
    signal = coh0 + coh1
    signal.flags.writeable = False

    curve = WitnessCurve(tau=tau, coh0=coh0, coh1=coh1, signal=signal, dim=dim)
    logger.debug(
        "witness_curve_done",
        t=config.t,
        theta=config.thermal.theta,
        dim=dim,
        max_abs_signal=curve.max_abs_signal,
    )
    return curve


def separability_gap(prep: PDParams, t: float, r0: Operator) -> float:
    """Trace distance between R00(t) and R11(t); zero iff the PD state is separable."""
    validate_density_operator(r0)
    r00, r11 = conditional_states(prep, t, r0)
    return trace_distance(r00, r11)


def _check_amplitudes(a: complex, b: complex) -> None:
    if a == 0 or b == 0:
        raise PreconditionError("both qubit amplitudes must be nonzero")
    norm = abs(a) ** 2 + abs(b) ** 2
    if abs(norm - 1.0) > AMPLITUDE_TOL:
        raise PreconditionError(f"|a|^2 + |b|^2 = {norm:.15g}, expected 1")


def pd_joint_state(prep: PDParams, t: float, a: complex, b: complex, r0: Operator) -> Operator:
    """
    sigma(t) = U_PD(t) (|psi><psi| (x) R0) U_PD(t)^dag with |psi> = a|0> + b|1>,
    assembled block-wise: block (i, j) = c_i c_j* w_i R0 w_j^dag.
    """
    _check_amplitudes(a, b)
    validate_density_operator(r0)
    n = r0.shape[0]
    w = conditional_pair(prep, t, n)
    amps = (a, b)
    state = np.empty((2 * n, 2 * n), dtype=np.complex128)
    for i in (0, 1):
        for j in (0, 1):
            coeff = amps[i] * np.conj(amps[j])
            state[i * n:(i + 1) * n, j * n:(j + 1) * n] = coeff * (w[i] @ r0 @ dagger(w[j]))
    return state


def joint_negativity(prep: PDParams, t: float, a_amp: complex, b_amp: complex, r0: Operator) -> float:
    """Negativity of the qubit partial transpose of sigma(t)."""
    return negativity(pd_joint_state(prep, t, a_amp, b_amp, r0))


def detection_joint_state(meas: PDParams, branch: int, r: Operator, tau: float) -> Operator:
    """
    Joint state after the Hadamard and a measurement-stage evolution:
    U'_PD(tau) (|h_i><h_i| (x) R) U'_PD(tau)^dag, |h_i> = (|0> +/- |1>)/sqrt(2).
    """
    if branch not in (0, 1):
        raise PreconditionError(f"branch must be 0 or 1, got {branch}")
    sign = 1.0 if branch == 0 else -1.0
    _, qubit = pure_qubit(1 / np.sqrt(2), sign / np.sqrt(2))
    n = r.shape[0]
    w = conditional_pair(meas, tau, n)
    state = np.empty((2 * n, 2 * n), dtype=np.complex128)
    for i in (0, 1):
        for j in (0, 1):
            state[i * n:(i + 1) * n, j * n:(j + 1) * n] = qubit[i, j] * (w[i] @ r @ dagger(w[j]))
    return state


def witness_verdict(
    curve: WitnessCurve,
    prep: PDParams,
    t: float,
    r0: Operator,
    threshold: float,
    amplitudes: Tuple[complex, complex] = (1 / np.sqrt(2), 1 / np.sqrt(2)),
    include_negativity: bool = True,
) -> WitnessVerdict:
    """
    Compare the witness signal with the exact criteria.

    witnessed <=> max|signal| > threshold. The witness is sufficient but not
    necessary, so consistency only requires witnessed => gap > threshold/4.
    """
    max_abs = curve.max_abs_signal
    gap = separability_gap(prep, t, r0)
    neg = joint_negativity(prep, t, amplitudes[0], amplitudes[1], r0) if include_negativity else None
    witnessed = max_abs > threshold
    consistency = (not witnessed) or gap > threshold / 4.0
    if not consistency:
        logger.warning("witness_inconsistent", max_abs_signal=max_abs, gap=gap, threshold=threshold)
    return WitnessVerdict(
        witnessed=witnessed,
        max_abs_signal=max_abs,
        separability_gap=gap,
        negativity_value=neg,
        consistency=consistency,
        threshold=threshold,
    )


def evaluate_protocol(
    config: ProtocolConfig,
    include_negativity: bool = True,
    dim: Optional[int] = None,
) -> Tuple[WitnessCurve, WitnessVerdict]:
    """Curve and verdict for one configuration at a shared cutoff."""
    curve = witness_curve(config, dim=dim)
    r0 = thermal_state(config.thermal, curve.dim)
    verdict = witness_verdict(
        curve,
        config.prep,
        config.t,
        r0,
        config.witness_threshold,
        amplitudes=(config.amplitude_a, config.amplitude_b),
        include_negativity=include_negativity,
    )
    return curve, verdict
