"""Parameter sweeps: parse ``--sweep``, evaluate both engines, write CSV.

Rows come out in sweep order (then τ order) whatever the worker count, and
every number is rendered with ten significant digits, so a run is
byte-for-byte reproducible from its seed.
"""
from __future__ import annotations

import csv
import logging
import math
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from .analysis import (
    association_prob_thz,
    coverage_hybrid,
    coverage_mmwave_standalone,
    coverage_thz_standalone,
    se_hybrid,
    se_mmwave,
    se_thz,
)
from .channel import absorption_coefficient
from .config import POWER_KEYS, db_to_linear, parse_threshold_db, parse_value, to_params, with_override
from .errors import ConfigError, DegenerateTierError, SweepError
from .montecarlo import (
    TrialOutcomes,
    association_from_outcomes,
    coverage_from_outcomes,
    se_from_outcomes,
    simulate,
)
from .schema import (
    Engines,
    Estimate,
    HybridParams,
    Metric,
    Mode,
    QuadratureSpec,
    RunConfig,
    RunMetadata,
    SweepRow,
    SweepSpec,
    Tier,
)
from .specfun import DEFAULT_QUADRATURE

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("sweep_key", "sweep_value", "tau_db", "analytic_value", "mc_mean", "mc_stderr", "n_trials", "seed")

_SCALES = ("lin", "log", "db")
_NON_NUMERIC = frozenset({"interferer_gain_model", "association_model"})

_MODES = {
    Metric.COVERAGE_THZ: Mode.THZ_ONLY,
    Metric.COVERAGE_MM: Mode.MM_ONLY,
}


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _number(key: str, text: str) -> float:
    try:
        return float(parse_value(key, text))
    except ValueError as exc:
        raise SweepError(f"{key}: {exc}") from exc


def parse_sweep(arg: str) -> Tuple[str, Tuple[float, ...]]:
    """``KEY=v1,v2,...`` or ``KEY=start:stop:steps[:lin|log|db]``."""
    key, sep, spec = arg.partition("=")
    key = key.strip()
    if not sep or not spec.strip():
        raise SweepError(f"sweep {arg!r} must look like KEY=SPEC")
    if key not in RunConfig.model_fields:
        raise SweepError(f"unknown sweep key {key!r}")
    if key in _NON_NUMERIC:
        raise SweepError(f"{key!r} is not a numeric parameter")

    if ":" not in spec:
        values = tuple(_number(key, v) for v in spec.split(",") if v.strip())
        if not values:
            raise SweepError(f"sweep over {key!r} has no values")
        return key, values

    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise SweepError(f"range {spec!r} must be start:stop:steps[:lin|log|db]")
    scale = parts[3].strip().lower() if len(parts) == 4 else "lin"
    if scale not in _SCALES:
        raise SweepError(f"unknown scale {scale!r}; use one of {', '.join(_SCALES)}")
    try:
        steps = int(parts[2])
    except ValueError as exc:
        raise SweepError(f"step count {parts[2]!r} is not an integer") from exc
    if steps < 1:
        raise SweepError("step count must be at least 1")

    if scale == "db":
        if key in POWER_KEYS:
            raise SweepError(f"{key!r} is already logarithmic; use a lin range in dBm")
        start, stop = float(parts[0]), float(parts[1])
        grid = db_to_linear(np.linspace(start, stop, steps))
    else:
        start, stop = _number(key, parts[0]), _number(key, parts[1])
        if scale == "log":
            if start <= 0 or stop <= 0:
                raise SweepError("log range needs positive endpoints")
            grid = np.geomspace(start, stop, steps)
        else:
            grid = np.linspace(start, stop, steps)
    return key, tuple(float(v) for v in grid)


def parse_tau_list(text: Optional[str]) -> Tuple[float, ...]:
    if not text:
        return ()
    try:
        return tuple(parse_threshold_db(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise SweepError(str(exc)) from exc


def build_sweep(
    sweep_arg: Optional[str], metric: Metric, tau_db: Optional[str], engines: Engines
) -> SweepSpec:
    key, values = parse_sweep(sweep_arg) if sweep_arg else (None, ())
    try:
        return SweepSpec(swept_key=key, values=values, metric=metric, tau_db=parse_tau_list(tau_db), engines=engines)
    except ValidationError as exc:
        raise SweepError("; ".join(e["msg"].removeprefix("Value error, ") for e in exc.errors())) from exc


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def analytic_value(
    metric: Metric, params: HybridParams, tau: Optional[float] = None, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """The analysis engine's value of *metric*; *tau* is linear."""
    if metric is Metric.COVERAGE_THZ:
        return coverage_thz_standalone(tau, params, spec)
    if metric is Metric.COVERAGE_MM:
        return coverage_mmwave_standalone(tau, params, spec)
    if metric is Metric.COVERAGE_HYBRID:
        return coverage_hybrid(tau, params, spec)
    if metric is Metric.SE_HYBRID:
        return se_hybrid(params, spec)
    if metric is Metric.SE_THZ:
        return se_thz(params, spec)
    if metric is Metric.SE_MM:
        return se_mmwave(params, spec)
    if metric is Metric.ASSOCIATION:
        return association_prob_thz(params, spec)
    return float(absorption_coefficient(params.thz.frequency, params.absorption))


def mc_estimates(metric: Metric, outcomes: TrialOutcomes, taus: Sequence[float]) -> List[Optional[Estimate]]:
    """Monte Carlo estimates matching :func:`analytic_value`, one per τ (or one)."""
    if metric.uses_tau:
        return list(coverage_from_outcomes(outcomes, taus))
    if metric is Metric.ASSOCIATION:
        return [association_from_outcomes(outcomes)]
    se = se_from_outcomes(outcomes)
    if metric is Metric.SE_THZ:
        return [se.by_tier.get(Tier.THZ)]
    if metric is Metric.SE_MM:
        return [se.by_tier.get(Tier.MMWAVE)]
    return [se]


def _point_configs(config: RunConfig, sweep: SweepSpec) -> List[Tuple[Optional[float], RunConfig]]:
    points = []
    for value in sweep.points:
        if value is None:
            points.append((None, config))
            continue
        try:
            points.append((value, with_override(config, sweep.swept_key, value)))
        except ConfigError as exc:
            raise SweepError(f"{sweep.swept_key}={value:g}: {exc}") from exc
    return points


def _finite(v: Optional[float]) -> Optional[float]:
    return v if v is not None and math.isfinite(v) else None


def run_sweep(
    config: RunConfig, sweep: SweepSpec, advance: Optional[Callable[[], None]] = None
) -> List[SweepRow]:
    """Evaluate every sweep point; *advance* is called once per finished point."""
    points = _point_configs(config, sweep)
    taus_db = sweep.tau_db if sweep.metric.uses_tau else (None,)
    taus = [db_to_linear(t) for t in sweep.tau_db] if sweep.metric.uses_tau else [None]
    rows: List[SweepRow] = []
    for value, point in points:
        params = to_params(point)
        spec = point.quadrature
        analytic: List[Optional[float]] = [None] * len(taus)
        if sweep.engines.analytic:
            for j, tau in enumerate(taus):
                try:
                    analytic[j] = analytic_value(sweep.metric, params, tau, spec)
                except DegenerateTierError as exc:
                    logger.warning("%s at %s=%s: %s", sweep.metric.value, sweep.swept_key, value, exc)
        estimates: List[Optional[Estimate]] = [None] * len(taus)
        if sweep.engines.montecarlo:
            outcomes = simulate(
                point.master_seed,
                params,
                point.n_trials,
                _MODES.get(sweep.metric, Mode.HYBRID),
                point.interferer_gain_model,
                point.workers,
            )
            estimates = mc_estimates(sweep.metric, outcomes, taus)
        for tau_db, a, est in zip(taus_db, analytic, estimates):
            rows.append(
                SweepRow(
                    sweep_key=sweep.swept_key or "",
                    sweep_value=value,
                    tau_db=tau_db,
                    analytic_value=_finite(a),
                    mc_mean=_finite(est.mean) if est else None,
                    mc_stderr=_finite(est.stderr) if est else None,
                    n_trials=point.n_trials if sweep.engines.montecarlo else None,
                    seed=point.master_seed if sweep.engines.montecarlo else None,
                )
            )
        if advance is not None:
            advance()
    return rows


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def write_csv(rows: Sequence[SweepRow], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([_cell(getattr(row, c)) for c in CSV_COLUMNS])
    logger.info("Wrote %d row(s) to %s", len(rows), path)


def metadata_path(csv_path: Path) -> Path:
    return csv_path.with_name(csv_path.name + ".meta.json")


def write_metadata(config: RunConfig, sweep: SweepSpec, csv_path: Path, version: str) -> Path:
    meta = RunMetadata(
        version=version,
        config=config,
        sweep=sweep,
        seed=config.master_seed,
        n_trials=config.n_trials,
        workers=config.workers,
        csv=csv_path.name,
    )
    path = metadata_path(csv_path)
    path.write_text(meta.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path
