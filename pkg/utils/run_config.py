"""
Run configuration parsing for the CLI.

Values come from two places: a KEY=value manifest (read with python-dotenv)
and command-line flags. Flags override the manifest. Both end up in one
mapping of manifest keys that `build_run_config` turns into a validated
RunConfig.

Manifest keys
-------------
MODE, STEPS, COIN, INIT, ORIGIN, M, DESIGN, F, GATING, ORDERING, OUTPUT,
COMPARE_CLASSICAL, DISPLAY_OFFSET, TOPOLOGY

COIN is "hadamard", "konno a_re a_im b_re b_im Δ_re Δ_im" or "delta δ";
INIT is "α_re α_im β_re β_im". Angles accept π-expressions such as pi/5.
"""

import logging
import math
import re
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence

from dotenv import dotenv_values

from app_config import config
from coins import make_galton_coin, make_hadamard, make_konno_coin
from exceptions import ConfigurationError, QuantumWalkError
from models import (
    CavityConfig,
    CavityDesign,
    CoinGating,
    CoinKind,
    CoinOperator,
    CoinSpec,
    InitialCoinState,
    RunConfig,
    RunMode,
    StepOrdering,
    WalkTopology,
)

logger = logging.getLogger(__name__)

MANIFEST_KEYS = (
    "MODE",
    "STEPS",
    "COIN",
    "INIT",
    "ORIGIN",
    "M",
    "DESIGN",
    "F",
    "GATING",
    "ORDERING",
    "OUTPUT",
    "COMPARE_CLASSICAL",
    "DISPLAY_OFFSET",
    "TOPOLOGY",
)

_PI_EXPRESSION = re.compile(
    r"^\s*(?P<sign>[+-]?)\s*(?P<num>\d+(?:\.\d*)?|\.\d+)?\s*\*?\s*pi\s*(?:/\s*(?P<den>\d+(?:\.\d*)?))?\s*$",
    re.IGNORECASE,
)
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off", ""}


def parse_angle(text: Any, key: str = "angle") -> float:
    """Parse a float or a π-expression (pi, -pi/4, 3pi/10, 0.5*pi)."""
    if isinstance(text, (int, float)):
        value = float(text)
    else:
        raw = str(text).strip()
        match = _PI_EXPRESSION.match(raw)
        try:
            if match:
                numerator = float(match.group("num") or 1.0)
                denominator = float(match.group("den") or 1.0)
                value = numerator * math.pi / denominator
                if match.group("sign") == "-":
                    value = -value
            else:
                value = float(raw)
        except (ValueError, ZeroDivisionError) as e:
            raise ConfigurationError(key, f"cannot parse angle {raw!r}: {e}")
    if not math.isfinite(value):
        raise ConfigurationError(key, f"angle must be finite, got {text!r}")
    return value


def _tokens(value: Any) -> list[str]:
    if isinstance(value, str):
        return value.replace(",", " ").split()
    return [str(v) for v in value]


def _complex_pairs(tokens: Sequence[str], count: int, key: str) -> list[complex]:
    if len(tokens) != 2 * count:
        raise ConfigurationError(key, f"expected {2 * count} numbers (re/im pairs), got {len(tokens)}")
    try:
        numbers = [float(t) for t in tokens]
    except ValueError as e:
        raise ConfigurationError(key, str(e))
    if not all(math.isfinite(x) for x in numbers):
        raise ConfigurationError(key, "values must be finite")
    return [complex(numbers[i], numbers[i + 1]) for i in range(0, len(numbers), 2)]


def parse_coin(value: Any) -> CoinSpec:
    """Parse the COIN value: hadamard | konno <6 numbers> | delta <angle>."""
    tokens = _tokens(value)
    if not tokens:
        raise ConfigurationError("COIN", "empty coin specification")
    try:
        kind = CoinKind(tokens[0].lower())
    except ValueError:
        raise ConfigurationError("COIN", f"unknown coin {tokens[0]!r}; use hadamard, konno or delta")

    if kind == CoinKind.HADAMARD:
        if len(tokens) != 1:
            raise ConfigurationError("COIN", "hadamard takes no parameters")
        return CoinSpec(kind)
    if kind == CoinKind.KONNO:
        a, b, unit = _complex_pairs(tokens[1:], 3, "COIN")
        return CoinSpec(kind, a=a, b=b, unit=unit)
    if len(tokens) != 2:
        raise ConfigurationError("COIN", "delta takes exactly one angle")
    return CoinSpec(kind, angle=parse_angle(tokens[1], "COIN"))


def parse_init(value: Any) -> InitialCoinState:
    alpha, beta = _complex_pairs(_tokens(value), 2, "INIT")
    return InitialCoinState(alpha, beta)


def _as_int(key: str, value: Any) -> int:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ConfigurationError(key, f"expected an integer, got {value!r}")
    if not number.is_integer():
        raise ConfigurationError(key, f"expected an integer, got {value!r}")
    return int(number)


def _as_bool(key: str, value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise ConfigurationError(key, f"expected true/false, got {value!r}")


def _as_enum(key: str, enum_cls: Any, value: Any) -> Any:
    try:
        return enum_cls(str(value).strip().lower())
    except ValueError:
        choices = ", ".join(member.value for member in enum_cls)
        raise ConfigurationError(key, f"{value!r} is not one of: {choices}")


def load_manifest(path: Path) -> dict[str, str]:
    """Read a KEY=value manifest. Unknown keys are rejected."""
    if not path.is_file():
        raise ConfigurationError("--config", f"manifest {path} not found")
    raw = dotenv_values(path)
    values: dict[str, str] = {}
    for key, value in raw.items():
        name = key.strip().upper()
        if name not in MANIFEST_KEYS:
            raise ConfigurationError(name, f"unknown manifest key in {path}")
        if value is not None:
            values[name] = value
    logger.debug(f"📄 Loaded manifest {path}: {sorted(values)}")
    return values


def merge_sources(manifest: Mapping[str, Any], overrides: Mapping[str, Any]) -> dict[str, Any]:
    """Manifest values overlaid with every override that is not None."""
    merged = dict(manifest)
    merged.update({key: value for key, value in overrides.items() if value is not None})
    return merged


def build_coin(spec: CoinSpec) -> CoinOperator:
    if spec.kind == CoinKind.HADAMARD:
        return make_hadamard()
    if spec.kind == CoinKind.KONNO:
        return make_konno_coin(spec.a, spec.b, spec.unit)
    return make_galton_coin(spec.angle)


def cavity_config_for(run: RunConfig) -> CavityConfig:
    """Cavity configuration of a galton or cavity run."""
    topology = WalkTopology.circle(run.M) if run.topology == "circle" else WalkTopology.line()
    delta = run.coin.angle if run.coin.kind == CoinKind.DELTA else None
    return CavityConfig(run.design, topology, run.f, run.gating, delta)


def build_run_config(values: Mapping[str, Any], mode: Optional[RunMode] = None) -> RunConfig:
    """
    Convert merged manifest/flag values into a validated RunConfig.

    `mode` (from the subcommand) wins over MODE in the manifest.

    Raises:
        ConfigurationError: for any malformed value or downstream invariant violation
    """
    manifest_mode = values.get("MODE")
    if mode is None:
        if manifest_mode is None:
            raise ConfigurationError("MODE", "no mode given")
        mode = _as_enum("MODE", RunMode, manifest_mode)
    elif manifest_mode is not None and str(manifest_mode).strip().lower() != mode.value:
        logger.warning(f"⚠️ Manifest MODE={manifest_mode} ignored, running {mode.value}")

    fields: dict[str, Any] = {"mode": mode}
    if "STEPS" in values:
        fields["steps"] = _as_int("STEPS", values["STEPS"])
    if "COIN" in values:
        fields["coin"] = parse_coin(values["COIN"])
    if "INIT" in values:
        fields["init"] = parse_init(values["INIT"])
    if "ORIGIN" in values:
        fields["origin"] = _as_int("ORIGIN", values["ORIGIN"])
    if "M" in values:
        fields["M"] = _as_int("M", values["M"])
    if "F" in values:
        fields["f"] = _as_int("F", values["F"])
    if "ORDERING" in values:
        fields["ordering"] = _as_enum("ORDERING", StepOrdering, values["ORDERING"])
    if "GATING" in values:
        fields["gating"] = _as_enum("GATING", CoinGating, values["GATING"])
    if "DESIGN" in values:
        fields["design"] = _as_enum("DESIGN", CavityDesign, values["DESIGN"])
    if "TOPOLOGY" in values:
        topology = str(values["TOPOLOGY"]).strip().lower()
        if topology not in ("line", "circle"):
            raise ConfigurationError("TOPOLOGY", f"expected line or circle, got {values['TOPOLOGY']!r}")
        fields["topology"] = topology
    if values.get("OUTPUT") not in (None, "", "-"):
        fields["output"] = Path(str(values["OUTPUT"]))
    if "COMPARE_CLASSICAL" in values:
        fields["compare_classical"] = _as_bool("COMPARE_CLASSICAL", values["COMPARE_CLASSICAL"])
    if "DISPLAY_OFFSET" in values:
        fields["display_offset"] = _as_bool("DISPLAY_OFFSET", values["DISPLAY_OFFSET"])

    if mode == RunMode.GALTON:
        fields.setdefault("design", CavityDesign.LINEAR_POLARIZATION)
        if fields.get("gating", CoinGating.EVERY_ROUNDTRIP) != CoinGating.EVERY_ROUNDTRIP:
            raise ConfigurationError("GATING", "the Galton board applies its coin on every roundtrip")
        fields["gating"] = CoinGating.EVERY_ROUNDTRIP
    if mode == RunMode.CIRCLE:
        fields["topology"] = "circle"
    elif mode in (RunMode.LINE, RunMode.CLASSICAL):
        fields["topology"] = "line"

    return validate_run_config(RunConfig(**fields))


def validate_run_config(run: RunConfig) -> RunConfig:
    """Check a RunConfig against every downstream precondition."""
    if not 0 <= run.steps <= config.max_steps:
        raise ConfigurationError("STEPS", f"must be in 0..{config.max_steps}, got {run.steps}")
    if run.mode == RunMode.CLASSICAL:
        return run

    if abs(run.origin) > config.max_index:
        raise ConfigurationError("ORIGIN", f"|origin| must be ≤ {config.max_index}, got {run.origin}")
    if run.topology == "circle":
        if not 1 <= run.M <= config.max_index:
            raise ConfigurationError("M", f"a circle needs 1 ≤ M ≤ {config.max_index}, got {run.M}")
        if not -run.M <= run.origin <= run.M:
            raise ConfigurationError("ORIGIN", f"{run.origin} outside -M..M = {-run.M}..{run.M}")
    if not 1 <= run.f <= config.max_roundtrips_per_step:
        raise ConfigurationError("F", f"must be in 1..{config.max_roundtrips_per_step}, got {run.f}")
    sites = 2 * run.M + 1 if run.topology == "circle" else 2 * run.steps + 1
    if run.mode in (RunMode.GALTON, RunMode.CAVITY):
        sites *= run.f * run.design.passes
    if sites > config.max_grid_size:
        raise ConfigurationError("STEPS", f"the run needs {sites} grid points, limit is {config.max_grid_size}")
    if abs(run.init.norm - 1.0) > config.coin_tolerance:
        raise ConfigurationError("INIT", f"|α|²+|β|² = {run.init.norm!r}, expected 1")

    if run.mode == RunMode.GALTON and run.coin.kind != CoinKind.DELTA:
        raise ConfigurationError("COIN", "the Galton board needs a delta coin (--delta)")
    if run.mode == RunMode.CAVITY and run.coin.kind == CoinKind.KONNO:
        raise ConfigurationError("COIN", "cavity elements realise the hadamard and delta coins only")

    try:
        build_coin(run.coin)
    except QuantumWalkError as e:
        raise ConfigurationError("COIN", e.message)
    return run
