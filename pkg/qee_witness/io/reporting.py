"""
CSV and verdict output.

Numbers are written with a fixed number of significant digits in the C
locale ('.' decimal point, no grouping) and rows end in a bare "\n", so
two runs of the same config produce identical bytes.
"""

import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional, TextIO, Union

from qee_witness.errors import OutputError
from qee_witness.schemas.protocol_schemas import WitnessCurve, WitnessVerdict
from qee_witness.schemas.sweep_schemas import ConvergenceReport, SweepResult

CURVE_HEADER = ("tau", "re0", "im0", "re1", "im1", "dre", "dim")
SWEEP_HEADER = ("t", "theta", "max_abs_re", "max_abs_im", "gap", "negativity", "dim", "residual")
CONVERGENCE_HEADER = ("t", "theta", "dim", "residual", "wall_time", "converged")
OVERRIDE_HEADER = ("prep_alpha", "meas_alpha")

EXIT_WITNESSED = 0
EXIT_NOT_WITNESSED = 1
EXIT_FAULT = 2


def format_value(x: Optional[float], precision: int = 12) -> str:
    """Fixed significant digits; None (quantity not computed) is written as nan."""
    if x is None:
        return "nan"
    # adding 0.0 folds -0.0 into 0.0
    return f"{float(x) + 0.0:.{precision}g}"


def format_alpha(z: complex, precision: int = 12) -> str:
    """Complex coupling as `re+imi`, matching the config grammar."""
    im = format_value(z.imag, precision)
    if not im.startswith("-"):
        im = "+" + im
    return f"{format_value(z.real, precision)}{im}i"


def format_bool(flag: bool) -> str:
    return "true" if flag else "false"


def _line(fields: List[str]) -> str:
    return ",".join(fields) + "\n"


@contextmanager
def open_output(path: Optional[Union[str, Path]], stdout: Optional[TextIO] = None) -> Iterator[TextIO]:
    """
    Text stream for an output path, or stdout when path is None.

    Raises:
        OutputError: the file cannot be opened or written
    """
    if path is None:
        yield stdout if stdout is not None else sys.stdout
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            yield handle
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e.strerror or e}") from e


def _write(out: TextIO, text: str) -> None:
    try:
        out.write(text)
    except OSError as e:
        name = getattr(out, "name", "<stream>")
        raise OutputError(f"cannot write {name}: {e.strerror or e}") from e


def emit_curve_csv(curve: WitnessCurve, out: TextIO, precision: int = 12) -> None:
    """
    One row per tau sample: both sign-corrected coherences and the signal
    (dre/dim are its real and imaginary parts).
    """
    lines = [_line(list(CURVE_HEADER))]
    for k in range(len(curve.tau)):
        c0, c1, s = curve.coh0[k], curve.coh1[k], curve.signal[k]
        lines.append(_line([
            format_value(curve.tau[k], precision),
            format_value(c0.real, precision),
            format_value(c0.imag, precision),
            format_value(c1.real, precision),
            format_value(c1.imag, precision),
            format_value(s.real, precision),
            format_value(s.imag, precision),
        ]))
    _write(out, "".join(lines))


def emit_sweep_csv(result: SweepResult, out: TextIO, precision: int = 12) -> None:
    header = list(SWEEP_HEADER)
    if result.has_override_axes:
        header = list(OVERRIDE_HEADER) + header
    lines = [_line(header)]
    for row in result.rows:
        fields = [
            format_value(row.t, precision),
            format_value(row.theta, precision),
            format_value(row.max_abs_re, precision),
            format_value(row.max_abs_im, precision),
            format_value(row.separability_gap, precision),
            format_value(row.negativity, precision),
            str(row.dim_used),
            format_value(row.residual, precision),
        ]
        if result.has_override_axes:
            fields = [format_alpha(row.prep_alpha, precision), format_alpha(row.meas_alpha, precision)] + fields
        lines.append(_line(fields))
    _write(out, "".join(lines))


def emit_convergence_csv(report: ConvergenceReport, out: TextIO, precision: int = 12) -> None:
    """
    Cutoff diagnostics per row. wall_time is the only column that varies
    between runs.
    """
    header = list(CONVERGENCE_HEADER)
    if report.has_override_axes:
        header = list(OVERRIDE_HEADER) + header
    lines = [_line(header)]
    for row in report.rows:
        fields = [
            format_value(row.t, precision),
            format_value(row.theta, precision),
            "nan" if row.dim_used is None else str(row.dim_used),
            format_value(row.residual, precision),
            format_value(row.wall_time, 6),
            format_bool(row.converged),
        ]
        if report.has_override_axes:
            fields = [format_alpha(row.prep_alpha, precision), format_alpha(row.meas_alpha, precision)] + fields
        lines.append(_line(fields))
    _write(out, "".join(lines))


def verdict_exit_code(verdict: WitnessVerdict) -> int:
    """0 witnessed, 1 not witnessed, 2 when the witness contradicts the gap."""
    if not verdict.consistency:
        return EXIT_FAULT
    return EXIT_WITNESSED if verdict.witnessed else EXIT_NOT_WITNESSED


def format_verdict(verdict: WitnessVerdict, precision: int = 12) -> str:
    return (
        f"witnessed={format_bool(verdict.witnessed)} "
        f"max_signal={format_value(verdict.max_abs_signal, precision)} "
        f"gap={format_value(verdict.separability_gap, precision)} "
        f"negativity={format_value(verdict.negativity_value, precision)} "
        f"consistent={format_bool(verdict.consistency)}\n"
    )


def emit_verdict(verdict: WitnessVerdict, out: TextIO, precision: int = 12) -> int:
    """Write the single-line verdict record and return the process exit code."""
    _write(out, format_verdict(verdict, precision))
    return verdict_exit_code(verdict)
