"""
Flat key-value config files.

One `key = value` per line, `#` starts a comment. Complex values are
written `re+imi` (e.g. `0.5+0.5i`), lists are comma-separated, and real
values may use `pi` multiples (`pi/6`, `3*pi/2`). Any `sweep.*` key turns
the file into a sweep specification.
"""

import math
import re
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np
import structlog
from pydantic import ValidationError

from qee_witness.errors import ConfigDomainError, ConfigParseError
from qee_witness.schemas.model_schemas import CutoffPolicy, PDParams, ThermalSpec
from qee_witness.schemas.protocol_schemas import DEFAULT_TAU_POINTS, ProtocolConfig
from qee_witness.schemas.sweep_schemas import SweepSpec

logger = structlog.get_logger(__name__)

_NUMBER = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_PI_EXPR = re.compile(rf"^(?:(?P<factor>{_NUMBER})\s*\*\s*)?(?P<sign>-)?pi(?:\s*/\s*(?P<divisor>{_NUMBER}))?$")
_BARE_UNIT = re.compile(r"(^|[+-])i$")


def parse_real(text: str) -> float:
    """Finite float, optionally a multiple/fraction of pi."""
    s = text.strip()
    match = _PI_EXPR.match(s)
    if match:
        value = math.pi
        if match.group("sign"):
            value = -value
        if match.group("factor"):
            value *= float(match.group("factor"))
        if match.group("divisor"):
            value /= float(match.group("divisor"))
    else:
        value = float(s)
    if not math.isfinite(value):
        raise ValueError(f"non-finite value {text!r}")
    return value


def parse_complex(text: str) -> complex:
    """`re+imi`, `re`, or `imi` with a finite real and imaginary part."""
    s = text.strip().replace(" ", "")
    if not s or "j" in s.lower() or "n" in s.lower():
        raise ValueError(f"invalid complex value {text!r}")
    if s.endswith("i"):
        s = _BARE_UNIT.sub(lambda m: f"{m.group(1)}1i", s)
        value = complex(s[:-1] + "j")
    else:
        value = complex(parse_real(s))
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"non-finite value {text!r}")
    return value


def parse_int(text: str) -> int:
    return int(text.strip())


def _parse_list(item: Callable[[str], Any]) -> Callable[[str], Tuple[Any, ...]]:
    def parse(text: str) -> Tuple[Any, ...]:
        if not text.strip():
            return ()
        return tuple(item(part) for part in text.split(","))
    return parse


# key -> (converter, location in the assembled model)
_KEYS: Dict[str, Tuple[Callable[[str], Any], Tuple[str, ...]]] = {
    "prep.alpha": (parse_complex, ("prep", "alpha")),
    "prep.beta": (parse_real, ("prep", "beta")),
    "prep.gamma": (parse_real, ("prep", "gamma")),
    "meas.alpha": (parse_complex, ("meas", "alpha")),
    "meas.beta": (parse_real, ("meas", "beta")),
    "meas.gamma": (parse_real, ("meas", "gamma")),
    "t": (parse_real, ("t",)),
    "theta": (parse_real, ("thermal", "theta")),
    "tau.values": (_parse_list(parse_real), ("tau_grid",)),
    "tau.start": (parse_real, ("tau_grid",)),
    "tau.stop": (parse_real, ("tau_grid",)),
    "tau.points": (parse_int, ("tau_grid",)),
    "cutoff.epsilon": (parse_real, ("cutoff", "epsilon")),
    "cutoff.n_max": (parse_int, ("cutoff", "n_max")),
    "witness.threshold": (parse_real, ("witness_threshold",)),
    "cross_check.a": (parse_complex, ("amplitude_a",)),
    "cross_check.b": (parse_complex, ("amplitude_b",)),
    "sweep.t_values": (_parse_list(parse_real), ("t_values",)),
    "sweep.theta_values": (_parse_list(parse_real), ("theta_values",)),
    "sweep.prep_alpha_values": (_parse_list(parse_complex), ("prep_alpha_values",)),
    "sweep.meas_alpha_values": (_parse_list(parse_complex), ("meas_alpha_values",)),
    "sweep.parallelism": (parse_int, ("parallelism",)),
}

_LIST_KEYS = frozenset(key for key in _KEYS if key.endswith("values"))
_WARN_IF_MISSING = ("prep.alpha", "meas.alpha")


def _key_for_location(loc: Tuple[Any, ...]) -> Optional[str]:
    """Config key for a pydantic error location (tau grid errors map to tau.values)."""
    for key, (_, target) in _KEYS.items():
        if tuple(loc[:len(target)]) == target:
            return key
    return None


def _read_pairs(text: str) -> Dict[str, Tuple[str, int]]:
    pairs: Dict[str, Tuple[str, int]] = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"expected 'key = value', got {raw.strip()!r}", line_number)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigParseError("missing key", line_number)
        if key not in _KEYS:
            raise ConfigParseError(f"unknown key {key!r}", line_number)
        if key in pairs:
            raise ConfigParseError(f"duplicate key {key!r} (first on line {pairs[key][1]})", line_number)
        pairs[key] = (value, line_number)
    return pairs


def _convert(pairs: Dict[str, Tuple[str, int]]) -> Dict[str, Any]:
    values: Dict[str, Any] = {}
    for key, (raw, line_number) in pairs.items():
        converter = _KEYS[key][0]
        if not raw and key not in _LIST_KEYS:
            raise ConfigParseError(f"missing value for {key!r}", line_number)
        try:
            values[key] = converter(raw)
        except ValueError as e:
            raise ConfigParseError(f"{key}: {e}", line_number) from e
    return values


def _tau_grid(values: Dict[str, Any], meas_beta: float) -> Optional[Tuple[float, ...]]:
    ranged = [k for k in ("tau.start", "tau.stop", "tau.points") if k in values]
    if "tau.values" in values:
        if ranged:
            raise ConfigDomainError(f"cannot combine tau.values with {', '.join(ranged)}", "tau.values")
        return values["tau.values"]
    if not ranged:
        return None
    start = values.get("tau.start", 0.0)
    if "tau.stop" in values:
        stop = values["tau.stop"]
    elif meas_beta > 0:
        stop = 2.0 * math.pi / meas_beta
    else:
        raise ConfigDomainError("must be positive to default tau.stop", "meas.beta")
    points = values.get("tau.points", DEFAULT_TAU_POINTS)
    if points < 1:
        raise ConfigDomainError("must be at least 1", "tau.points")
    return tuple(float(x) for x in np.linspace(start, stop, points))


def _params(values: Dict[str, Any], phase: str) -> Dict[str, Any]:
    return {
        name: values[f"{phase}.{name}"]
        for name in ("alpha", "beta", "gamma")
        if f"{phase}.{name}" in values
    }


def parse_config(text: str) -> Union[ProtocolConfig, SweepSpec]:
    """
    Parse and validate a config file, applying defaults.

    Raises:
        ConfigParseError: syntax problems, with the offending line number
        ConfigDomainError: values that violate a model invariant
    """
    pairs = _read_pairs(text)
    values = _convert(pairs)
    is_sweep = any(key.startswith("sweep.") for key in values)

    for key in _WARN_IF_MISSING:
        if key not in values:
            logger.warning("config_default_applied", key=key, value="0+0i",
                           note="zero coupling in this phase yields no witness signal")

    prep = _params(values, "prep")
    meas = _params(values, "meas")
    base: Dict[str, Any] = {"prep": prep, "meas": meas}
    if "t" in values:
        base["t"] = values["t"]
    if "theta" in values:
        base["thermal"] = {"theta": values["theta"]}
    cutoff = {name: values[f"cutoff.{name}"] for name in ("epsilon", "n_max") if f"cutoff.{name}" in values}
    if cutoff:
        base["cutoff"] = cutoff
    for key, field in (("witness.threshold", "witness_threshold"),
                       ("cross_check.a", "amplitude_a"),
                       ("cross_check.b", "amplitude_b")):
        if key in values:
            base[field] = values[key]
    base["tau_grid"] = _tau_grid(values, meas.get("beta", 1.0))

    try:
        config = ProtocolConfig.model_validate(base)
        if not is_sweep:
            return config
        return SweepSpec(
            base=config,
            t_values=values.get("sweep.t_values", (config.t,)),
            theta_values=values.get("sweep.theta_values", (config.thermal.theta,)),
            prep_alpha_values=values.get("sweep.prep_alpha_values", ()),
            meas_alpha_values=values.get("sweep.meas_alpha_values", ()),
            parallelism=values.get("sweep.parallelism", 0),
        )
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigDomainError(first["msg"], _key_for_location(tuple(first["loc"]))) from e


def format_real(x: float) -> str:
    """Shortest text that parses back to exactly x."""
    return repr(float(x) + 0.0)


def format_complex(z: complex) -> str:
    re_part = format_real(z.real)
    im_part = format_real(z.imag)
    if not im_part.startswith("-"):
        im_part = "+" + im_part
    return f"{re_part}{im_part}i"


def _join(items: List[str]) -> str:
    return ", ".join(items)


def serialize_config(config: Union[ProtocolConfig, SweepSpec]) -> str:
    """Text that parse_config maps back to an equal config."""
    spec = config if isinstance(config, SweepSpec) else None
    base = spec.base if spec is not None else config

    lines = ["# qee-witness configuration"]
    for phase in ("prep", "meas"):
        params: PDParams = getattr(base, phase)
        lines.append(f"{phase}.alpha = {format_complex(params.alpha)}")
        lines.append(f"{phase}.beta = {format_real(params.beta)}")
        lines.append(f"{phase}.gamma = {format_real(params.gamma)}")
    thermal: ThermalSpec = base.thermal
    cutoff: CutoffPolicy = base.cutoff
    lines += [
        f"t = {format_real(base.t)}",
        f"theta = {format_real(thermal.theta)}",
        f"tau.values = {_join([format_real(x) for x in base.tau_grid])}",
        f"cutoff.epsilon = {format_real(cutoff.epsilon)}",
        f"cutoff.n_max = {cutoff.n_max}",
        f"witness.threshold = {format_real(base.witness_threshold)}",
        f"cross_check.a = {format_complex(base.amplitude_a)}",
        f"cross_check.b = {format_complex(base.amplitude_b)}",
    ]
    if spec is not None:
        lines += [
            f"sweep.t_values = {_join([format_real(x) for x in spec.t_values])}",
            f"sweep.theta_values = {_join([format_real(x) for x in spec.theta_values])}",
            f"sweep.parallelism = {spec.parallelism}",
        ]
        if spec.prep_alpha_values:
            lines.append(f"sweep.prep_alpha_values = {_join([format_complex(z) for z in spec.prep_alpha_values])}")
        if spec.meas_alpha_values:
            lines.append(f"sweep.meas_alpha_values = {_join([format_complex(z) for z in spec.meas_alpha_values])}")
    return "\n".join(lines) + "\n"
