"""
CLI application using Typer.
Commands: curve, verdict, sweep, convergence, config, version
"""

from pathlib import Path
from typing import Optional, Union

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape

from qee_witness import __version__
from qee_witness.config import get_settings
from qee_witness.errors import ConfigDomainError, ConfigParseError, ConvergenceError, QEEWitnessError
from qee_witness.io import (
    emit_convergence_csv,
    emit_curve_csv,
    emit_sweep_csv,
    emit_verdict,
    open_output,
    parse_config,
    serialize_config,
)
from qee_witness.io.reporting import EXIT_FAULT
from qee_witness.logging_config import configure_logging
from qee_witness.physics import convergence_report, evaluate_protocol, run_sweep, witness_curve
from qee_witness.schemas import ProtocolConfig, RunConfig, RunMode, SweepSpec

app = typer.Typer(
    name="qee-witness",
    help="Witness qubit-environment entanglement from qubit coherence alone",
    add_completion=False,
)

# stdout carries CSV and verdict records only
console = Console(stderr=True)

CONFIG_OPTION = typer.Option(..., "--config", "-c", help="Flat key-value config file")
OUT_OPTION = typer.Option(None, "--out", "-o", help="Output file (default: stdout)")


def _fail(message: str) -> None:
    console.print(f"[bold red]❌ Error:[/bold red] {escape(message)}")
    raise typer.Exit(EXIT_FAULT)


def _run_config(
    mode: RunMode,
    config_path: Path,
    out: Optional[Path],
    threshold: Optional[float] = None,
    negativity: Optional[bool] = None,
) -> RunConfig:
    settings = get_settings()
    configure_logging(settings.log_level, settings.log_json)
    return RunConfig(
        mode=mode,
        config_path=config_path,
        output_path=out,
        precision=settings.csv_precision,
        threshold=threshold,
        include_negativity=negativity,
    )


def _load(run: RunConfig) -> Union[ProtocolConfig, SweepSpec]:
    try:
        raw = run.config_path.read_bytes()
    except OSError as e:
        raise ConfigDomainError(f"cannot read {run.config_path}: {e.strerror or e}") from e
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        line_number = raw.count(b"\n", 0, e.start) + 1
        raise ConfigParseError(f"not valid UTF-8 ({e.reason})", line_number) from e
    return parse_config(text)


def _single(run: RunConfig) -> ProtocolConfig:
    """Single-configuration modes reject sweep files."""
    config = _load(run)
    if isinstance(config, SweepSpec):
        raise ConfigDomainError(f"{run.mode} mode takes a single configuration, found sweep.* keys")
    if run.threshold is not None:
        config = config.replace(witness_threshold=run.threshold)
    return config


def _as_sweep(run: RunConfig) -> SweepSpec:
    """A plain config runs as a one-row sweep."""
    config = _load(run)
    if isinstance(config, SweepSpec):
        return config
    return SweepSpec(base=config, t_values=(config.t,), theta_values=(config.thermal.theta,))


def _report_written(run: RunConfig) -> None:
    if run.output_path is not None:
        console.print(f"[green]✅ Wrote {escape(str(run.output_path))}[/green]")


@app.command()
def curve(
    config: Path = CONFIG_OPTION,
    out: Optional[Path] = OUT_OPTION,
):
    """
    📈 Coherence curves of both preparation branches as CSV.

    Columns: tau,re0,im0,re1,im1,dre,dim (dre/dim: real and imaginary part
    of the coherence difference).
    """
    try:
        run = _run_config("curve", config, out)
        result = witness_curve(_single(run))
        with open_output(run.output_path) as stream:
            emit_curve_csv(result, stream, run.precision)
        _report_written(run)
    except (QEEWitnessError, ValidationError) as e:
        _fail(str(e))


@app.command()
def verdict(
    config: Path = CONFIG_OPTION,
    out: Optional[Path] = OUT_OPTION,
    threshold: Optional[float] = typer.Option(None, "--threshold", help="Override witness.threshold"),
    negativity: Optional[bool] = typer.Option(
        None, "--negativity/--no-negativity", help="Negativity cross-check (default: on)"
    ),
):
    """
    ⚖️  Witness verdict with the exact separability cross-checks.

    Exit code 0 = witnessed, 1 = not witnessed, 2 = error or inconsistency.
    """
    try:
        run = _run_config("verdict", config, out, threshold, negativity)
        _, result = evaluate_protocol(_single(run), include_negativity=run.negativity_enabled)
        with open_output(run.output_path) as stream:
            code = emit_verdict(result, stream, run.precision)
    except (QEEWitnessError, ValidationError) as e:
        _fail(str(e))
    if code == EXIT_FAULT:
        console.print("[bold red]❌ Witness signal without a separability gap: numerical fault[/bold red]")
    raise typer.Exit(code)


@app.command()
def sweep(
    config: Path = CONFIG_OPTION,
    out: Optional[Path] = OUT_OPTION,
    negativity: Optional[bool] = typer.Option(
        None, "--negativity/--no-negativity", help="Negativity column (default: off)"
    ),
):
    """
    🗺️  Witness signal, separability gap and negativity over (t, theta).
    """
    try:
        run = _run_config("sweep", config, out, negativity=negativity)
        spec = _as_sweep(run)
        with console.status(f"[bold green]Evaluating {spec.row_count} rows..."):
            result = run_sweep(spec, include_negativity=run.negativity_enabled)
        with open_output(run.output_path) as stream:
            emit_sweep_csv(result, stream, run.precision)
        _report_written(run)
    except ConvergenceError as e:
        rows = ", ".join(f"(t={t:g}, theta={theta:g})" for t, theta in e.failing_rows)
        _fail(f"{e}" + (f"\nFailing rows: {rows}" if rows else ""))
    except (QEEWitnessError, ValidationError) as e:
        _fail(str(e))


@app.command()
def convergence(
    config: Path = CONFIG_OPTION,
    out: Optional[Path] = OUT_OPTION,
):
    """
    🔬 Fock cutoff diagnostics per sweep row.

    The CSV is written even when rows fail; the exit code is then 2.
    """
    try:
        run = _run_config("convergence", config, out)
        report = convergence_report(_as_sweep(run))
        with open_output(run.output_path) as stream:
            emit_convergence_csv(report, stream, run.precision)
        _report_written(run)
    except (QEEWitnessError, ValidationError) as e:
        _fail(str(e))
    if not report.all_converged:
        failed = sum(1 for row in report.rows if not row.converged)
        _fail(f"{failed} of {len(report.rows)} rows did not converge (epsilon {report.epsilon:.0e})")


@app.command(name="config")
def show_config(
    config: Path = CONFIG_OPTION,
    out: Optional[Path] = OUT_OPTION,
):
    """
    🧾 Print the config with every default filled in.
    """
    try:
        run = _run_config("config", config, out)
        text = serialize_config(_load(run))
        with open_output(run.output_path) as stream:
            stream.write(text)
    except (QEEWitnessError, ValidationError) as e:
        _fail(str(e))


@app.command()
def version():
    """Show version information."""
    console.print("[bold cyan]qee-witness[/bold cyan]")
    console.print(f"Version: [green]{__version__}[/green]")


if __name__ == "__main__":
    app()
