"""Run configuration: flat ``key = value`` files, unit parsing and conversion.

Files are read with :func:`dotenv.dotenv_values` (``#`` comments, no
interpolation). Powers need an explicit unit, frequencies take an optional one,
everything else is a bare SI number. Every problem is collected and reported
at once in a :class:`~thzhybrid.errors.ConfigError`.
"""
from __future__ import annotations

import logging
import math
import re
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from dotenv import dotenv_values
from pydantic import ValidationError

from .analysis.derived import derived
from .errors import ConfigError
from .schema import (
    Environment,
    FixedAbsorption,
    HybridParams,
    RunConfig,
    SimplifiedAbsorption,
    TierParams,
)

logger = logging.getLogger(__name__)

POWER_KEYS = frozenset({"tx_power_thz", "tx_power_mm", "noise_power_mm"})
FREQUENCY_KEYS = frozenset({"frequency_thz", "frequency_mm"})

# Offsets that turn each power unit into dBm after 10·log10 where needed.
_POWER_UNITS = {"dbm": None, "dbw": None, "w": 30.0, "mw": 0.0}
_FREQUENCY_UNITS = {"": 1.0, "hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9, "thz": 1e12}
_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z]*)\s*$")


def _split(text: str):
    match = _QUANTITY.match(text)
    if match is None:
        raise ValueError(f"cannot read {text!r} as a number with an optional unit")
    return float(match.group(1)), match.group(2).lower()


def parse_power_dbm(text: str) -> float:
    """``'73 dBm'``, ``'43 dBW'``, ``'20 W'`` or ``'5 mW'`` → dBm."""
    value, unit = _split(text)
    if unit not in _POWER_UNITS:
        raise ValueError(f"power {text!r} needs a unit: dBm, dBW, W or mW")
    if unit == "dbm":
        return value
    if unit == "dbw":
        return value + 30.0
    if value < 0:
        raise ValueError(f"power {text!r} is negative")
    return 10.0 * math.log10(value) + _POWER_UNITS[unit] if value > 0 else -math.inf


def parse_frequency_hz(text: str) -> float:
    value, unit = _split(text)
    if unit not in _FREQUENCY_UNITS:
        raise ValueError(f"unknown frequency unit in {text!r}; use Hz, kHz, MHz, GHz or THz")
    return value * _FREQUENCY_UNITS[unit]


def parse_threshold_db(text: str) -> float:
    """Threshold in dB; a ``lin`` suffix marks a linear value instead."""
    value, unit = _split(text)
    if unit in {"", "db"}:
        return value
    if unit == "lin":
        if value <= 0:
            raise ValueError(f"linear threshold {text!r} must be positive")
        return 10.0 * math.log10(value)
    raise ValueError(f"threshold {text!r} must be in dB or suffixed 'lin'")


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def parse_value(key: str, text: str) -> Any:
    """Value of *key* in the units :class:`RunConfig` stores it in."""
    if key in POWER_KEYS:
        return parse_power_dbm(text)
    if key in FREQUENCY_KEYS:
        return parse_frequency_hz(text)
    return text.strip()


# ---------------------------------------------------------------------------
# Building RunConfig
# ---------------------------------------------------------------------------


def _diagnostics(exc: ValidationError) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for err in exc.errors():
        key = ".".join(str(p) for p in err["loc"]) or "frequency_thz"
        msg = err["msg"].removeprefix("Value error, ")
        out[key] = f"{out[key]}; {msg}" if key in out else msg
    return out


def config_from_mapping(raw: Mapping[str, Optional[str]], source: Optional[str] = None) -> RunConfig:
    """Validate raw ``key -> text`` pairs; the resulting scenario is checked too."""
    known = set(RunConfig.model_fields)
    diagnostics: Dict[str, str] = {}
    values: Dict[str, Any] = {}
    for key, text in raw.items():
        if key not in known:
            diagnostics[key] = "unknown key"
            continue
        if text is None or not text.strip():
            diagnostics[key] = "missing value"
            continue
        try:
            values[key] = parse_value(key, text)
        except ValueError as exc:
            diagnostics[key] = str(exc)
    if diagnostics:
        raise ConfigError(diagnostics, source)
    try:
        config = RunConfig.model_validate(values)
    except ValidationError as exc:
        raise ConfigError(_diagnostics(exc), source) from exc
    to_params(config, source)
    return config


def load_config(path: Optional[Path] = None) -> RunConfig:
    """Read *path*; no path means the default scenario."""
    if path is None:
        return config_from_mapping({})
    if not path.is_file():
        raise ConfigError({"config": f"cannot read {path}"}, str(path))
    raw = dotenv_values(path, interpolate=False)
    logger.info("Loaded %d key(s) from %s", len(raw), path)
    return config_from_mapping(raw, str(path))


def with_override(config: RunConfig, key: str, value: Any) -> RunConfig:
    """Copy of *config* with one key replaced and revalidated."""
    if key not in RunConfig.model_fields:
        raise ConfigError({key: "unknown key"})
    try:
        updated = RunConfig.model_validate({**config.model_dump(), key: value})
    except ValidationError as exc:
        raise ConfigError(_diagnostics(exc)) from exc
    to_params(updated)
    return updated


# ---------------------------------------------------------------------------
# Internal units
# ---------------------------------------------------------------------------


def to_params(config: RunConfig, source: Optional[str] = None) -> HybridParams:
    """Scenario in SI units (watts, linear) as used by the analysis and the simulator."""
    env = Environment(
        temperature=config.temperature,
        pressure=config.pressure,
        relative_humidity=config.relative_humidity,
    )
    if config.absorption_coefficient is not None:
        absorption = FixedAbsorption(k_a=config.absorption_coefficient)
    else:
        absorption = SimplifiedAbsorption(environment=env)
    try:
        return HybridParams(
            thz=TierParams(
                density=config.density_thz,
                frequency=config.frequency_thz,
                tx_power=dbm_to_watts(config.tx_power_thz),
                bias=config.bias_thz,
                pathloss_exponent=config.pathloss_exponent_thz,
                los_radius=config.los_radius_thz,
                array_size=config.array_size_thz,
            ),
            mmwave=TierParams(
                density=config.density_mm,
                frequency=config.frequency_mm,
                tx_power=dbm_to_watts(config.tx_power_mm),
                bias=config.bias_mm,
                pathloss_exponent=config.pathloss_exponent_mm,
                los_radius=config.los_radius_mm,
                array_size=config.array_size_mm,
            ),
            nakagami_m=config.nakagami_m,
            mmwave_noise_power=dbm_to_watts(config.noise_power_mm),
            environment=env,
            absorption=absorption,
            association_model=config.association_model,
        )
    except ValidationError as exc:
        raise ConfigError(_diagnostics(exc), source) from exc


def resolved_view(config: RunConfig) -> Dict[str, Dict[str, Any]]:
    """Effective configuration next to its internal, unit-converted values."""
    params = to_params(config)
    d = derived(params)
    internal = {
        "tx_power_thz [W]": params.thz.tx_power,
        "tx_power_mm [W]": params.mmwave.tx_power,
        "noise_power_mm [W]": params.mmwave_noise_power,
        "absorption_coefficient [1/m]": d.k_a,
        "epsilon": d.epsilon,
        "hpbw_thz": d.thz_pattern.hpbw,
        "hpbw_mm": d.mm_pattern.hpbw,
        "normalized_noise_thz": d.noise.thz_hat_n,
        "normalized_noise_mm": d.noise.mm_sigma2,
    }
    return {"config": config.model_dump(mode="json"), "internal": internal}
