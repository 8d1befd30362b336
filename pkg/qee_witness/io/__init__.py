"""
Config file grammar and CSV/verdict output.
"""

from .config_parser import parse_config, serialize_config
from .reporting import (
    emit_convergence_csv,
    emit_curve_csv,
    emit_sweep_csv,
    emit_verdict,
    open_output,
    verdict_exit_code,
)

__all__ = [
    # Config files
    "parse_config",
    "serialize_config",
    # Output
    "open_output",
    "emit_curve_csv",
    "emit_sweep_csv",
    "emit_convergence_csv",
    "emit_verdict",
    "verdict_exit_code",
]
