"""Utility script to regenerate the data series of every published figure
as CSV files, using the sweep engine of the ``thzhybrid`` package.

It re-uses the configuration and sweep utilities from ``thzhybrid`` and simply
wraps them in a small CLI so that you can run it independently of the Typer
CLI defined in ``thzhybrid.cli``.

Usage
-----

    # Every preset, default scenario, into figures/
    python reproduce_figures.py

    # Two presets only, fewer trials, analytic curves only
    python reproduce_figures.py --only absorption,thz_coverage --trials 2000 --engines analytic

Each series produces ``<out>/<preset>[_<family>].csv`` plus its
``.meta.json`` sidecar.
"""
from __future__ import annotations

import argparse
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Tuple

from thzhybrid import __version__
from thzhybrid.config import load_config, with_override
from thzhybrid.schema import Engines, Metric, RunConfig
from thzhybrid.sweep import build_sweep, run_sweep, write_csv, write_metadata

DEFAULT_OUT_DIR = Path("figures")


class Preset(NamedTuple):
    metric: Metric
    sweep: str
    tau_db: Optional[str] = None
    family_key: Optional[str] = None
    family: Tuple[float, ...] = ()
    fixed: Dict[str, float] = {}
    analytic_only: bool = False


PRESETS: Dict[str, Preset] = {
    "absorption": Preset(Metric.ABSORPTION_COEFFICIENT, "frequency_thz=275GHz:400GHz:251", analytic_only=True),
    "thz_coverage": Preset(
        Metric.COVERAGE_THZ, "array_size_thz=8,16,32,64", tau_db="-10,-5,0,5,10,15,20,25,30,35,40"
    ),
    "thz_coverage_pathloss": Preset(
        Metric.COVERAGE_THZ,
        "pathloss_exponent_thz=2,3,4",
        tau_db="-10,-5,0,5,10,15,20,25,30,35,40",
        fixed={"array_size_thz": 32},
    ),
    "thz_coverage_frequency": Preset(Metric.COVERAGE_THZ, "frequency_thz=275GHz:400GHz:26", tau_db="20"),
    "association": Preset(
        Metric.ASSOCIATION, "density_thz=1e-3:0.05:12:log", family_key="bias_thz", family=(1.0, 10.0)
    ),
    "hybrid_coverage_bias": Preset(
        Metric.COVERAGE_HYBRID,
        "bias_thz=-10:20:7:db",
        tau_db="30",
        family_key="array_size_thz",
        family=(32, 64, 128),
        fixed={"density_thz": 0.01},
    ),
    "hybrid_se_bias": Preset(
        Metric.SE_HYBRID, "bias_thz=-10:20:7:db", family_key="array_size_thz", family=(32, 64, 128)
    ),
    "hybrid_coverage_density": Preset(
        Metric.COVERAGE_HYBRID,
        "density_thz=1e-3:0.05:8:log",
        tau_db="20",
        family_key="bias_thz",
        family=(0.1, 1.0, 10.0),
    ),
    "hybrid_se_density": Preset(
        Metric.SE_HYBRID, "density_thz=1e-3:0.05:8:log", family_key="bias_thz", family=(0.1, 1.0, 10.0)
    ),
}


def _series(name: str, preset: Preset, base: RunConfig) -> List[Tuple[str, RunConfig]]:
    config = base
    for key, value in preset.fixed.items():
        config = with_override(config, key, value)
    if preset.family_key is None:
        return [(name, config)]
    return [(f"{name}_{preset.family_key}_{v:g}", with_override(config, preset.family_key, v)) for v in preset.family]


def reproduce(names: List[str], out_dir: Path, config: RunConfig, engines: Engines) -> None:
    """Write every series of the *names* presets under *out_dir*."""
    out_dir = out_dir.expanduser()
    out_dir.mkdir(parents=True, exist_ok=True)

    for i, name in enumerate(names, start=1):
        preset = PRESETS[name]
        chosen = Engines.ANALYTIC if preset.analytic_only else engines
        sweep = build_sweep(preset.sweep, preset.metric, preset.tau_db, chosen)
        print(f"[{i}/{len(names)}] {name}: {preset.metric.value} over {sweep.swept_key} …")
        for label, series_config in _series(name, preset, config):
            csv_path = out_dir / f"{label}.csv"
            rows = run_sweep(series_config, sweep)
            write_csv(rows, csv_path)
            write_metadata(series_config, sweep, csv_path, __version__)
            print(f"    → {csv_path} ({len(rows)} rows)")
    print("✓ Figure data regenerated.")


def parse_args():
    parser = argparse.ArgumentParser(description="Regenerate figure data series as CSV")
    parser.add_argument("--config", type=Path, default=None, help="Scenario file (default: published scenario)")
    parser.add_argument("--out", type=Path, default=DEFAULT_OUT_DIR, help="Output directory (default: ./figures)")
    parser.add_argument(
        "--only",
        default=",".join(PRESETS),
        help=f"Comma-separated presets (default: all of {', '.join(PRESETS)})",
    )
    parser.add_argument("--engines", choices=[e.value for e in Engines], default=Engines.BOTH.value)
    parser.add_argument("--trials", type=int, default=None, help="Monte Carlo trials per point")
    parser.add_argument("--seed", type=int, default=None, help="Master seed")
    parser.add_argument("--workers", type=int, default=None, help="Monte Carlo worker processes")
    return parser.parse_args()


if __name__ == "__main__":
    args = parse_args()
    names = [n.strip() for n in args.only.split(",") if n.strip()]
    unknown = [n for n in names if n not in PRESETS]
    if unknown:
        raise SystemExit(f"unknown preset(s): {', '.join(unknown)}")
    cfg = load_config(args.config)
    for key, value in (("n_trials", args.trials), ("master_seed", args.seed), ("workers", args.workers)):
        if value is not None:
            cfg = with_override(cfg, key, value)
    reproduce(names, args.out, cfg, Engines(args.engines))
