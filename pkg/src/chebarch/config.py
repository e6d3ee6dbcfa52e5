"""Experiment configuration: flat ``key = value`` files plus command-line overrides."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, fields
from pathlib import Path

from .adc import POLICIES
from .bench import SCHEMES
from .core import Interval
from .signals import SignalSpec, parse_signal
from .systolic import ARCHITECTURES

OUTPUT_DIR_ENV = "CHEBARCH_OUTPUT_DIR"


class ConfigError(ValueError):
    """Invalid configuration value; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class ExperimentConfig:
    signal: SignalSpec
    signal_text: str = "harmonic"
    interval: Interval = Interval(-1.0, 1.0)
    n_points: int = 8
    n_min: int = 2
    n_max: int = 16
    schemes: tuple[str, ...] = SCHEMES
    error_target_percent: float | None = None
    grid_density: int = 2001
    bits: int = 8
    t_sar: float = 2.0
    policy: str = "both_adjacent"
    baseline_points: int | None = None
    window_size: int = 8
    n_windows: int = 4
    arch: str = "proposed"
    output_format: str | None = None
    output: Path | None = None
    jobs: int = 1


def read_config_file(path: str | os.PathLike) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment, keys use ``_`` or ``-``."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw!r}")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _as_int(name, value, minimum=None):
    try:
        out = int(value)
        if isinstance(value, float) and out != value:
            raise ValueError
    except (TypeError, ValueError):
        raise ConfigError(name, f"expected an integer, got {value!r}") from None
    if minimum is not None and out < minimum:
        raise ConfigError(name, f"must be >= {minimum}, got {out}")
    return out


def _as_float(name, value, minimum=None, allow_inf=False):
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ConfigError(name, f"expected a number, got {value!r}") from None
    if math.isnan(out) or (math.isinf(out) and not allow_inf):
        raise ConfigError(name, f"must be finite, got {value!r}")
    if minimum is not None and out < minimum:
        raise ConfigError(name, f"must be >= {minimum}, got {out}")
    return out


def _as_choice(name, value, choices):
    if value not in choices:
        raise ConfigError(name, f"expected one of {', '.join(choices)}, got {value!r}")
    return value


def resolve_output(path: str | os.PathLike | None) -> Path | None:
    """Relative output paths land under ``$CHEBARCH_OUTPUT_DIR`` when it is set."""
    if path is None or str(path) == "-":
        return None
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def build_config(raw: dict) -> ExperimentConfig:
    """Validate a merged mapping of raw values into an :class:`ExperimentConfig`."""
    known = {f.name for f in fields(ExperimentConfig)} | {"target", "format", "window", "windows", "grid", "n"}
    unknown = set(raw) - known
    if unknown:
        name = sorted(unknown)[0]
        raise ConfigError(name, "unknown key")

    get = raw.get
    kw = {}
    text = get("signal", "harmonic")
    try:
        kw["signal"] = parse_signal(str(text))
    except ValueError as exc:
        raise ConfigError("signal", str(exc)) from None
    kw["signal_text"] = str(text)

    iv = get("interval")
    if iv is not None:
        parts = iv.replace(",", " ").split() if isinstance(iv, str) else list(iv)
        if len(parts) != 2:
            raise ConfigError("interval", f"expected two numbers, got {iv!r}")
        lo, hi = (_as_float("interval", v) for v in parts)
        if lo >= hi:
            raise ConfigError("interval", f"lo must be < hi, got [{lo}, {hi}]")
        kw["interval"] = Interval(lo, hi)

    ints = {
        "n_points": ("n", 2),
        "n_min": (None, 2),
        "n_max": (None, 2),
        "grid_density": ("grid", 1000),
        "bits": (None, 1),
        "window_size": ("window", 1),
        "n_windows": ("windows", 1),
        "jobs": (None, 1),
        "baseline_points": (None, 1),
    }
    for name, (alias, minimum) in ints.items():
        value = get(name, get(alias) if alias else None)
        if value is not None:
            kw[name] = _as_int(name, value, minimum)
    if kw.get("n_min", 2) > kw.get("n_max", 16):
        raise ConfigError("n_min", "must not exceed n_max")

    target = get("error_target_percent", get("target"))
    if target is not None:
        kw["error_target_percent"] = _as_float("error_target_percent", target)
        if kw["error_target_percent"] <= 0:
            raise ConfigError("error_target_percent", "must be positive")
    if get("t_sar") is not None:
        kw["t_sar"] = _as_float("t_sar", get("t_sar"), minimum=0.0, allow_inf=True)

    schemes = get("schemes")
    if schemes is not None:
        items = schemes.replace(",", " ").split() if isinstance(schemes, str) else list(schemes)
        if not items:
            raise ConfigError("schemes", "at least one scheme is required")
        kw["schemes"] = tuple(_as_choice("schemes", s, SCHEMES) for s in items)
    if get("policy") is not None:
        kw["policy"] = _as_choice("policy", get("policy"), POLICIES)
    if get("arch") is not None:
        kw["arch"] = _as_choice("arch", get("arch"), ARCHITECTURES)
    fmt = get("output_format", get("format"))
    if fmt is not None:
        kw["output_format"] = _as_choice("output_format", fmt, ("csv", "json"))
    if get("output") is not None:
        kw["output"] = resolve_output(get("output"))
    return ExperimentConfig(**kw)
