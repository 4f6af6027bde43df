"""THz/mmWave hybrid network analysis engine with a Monte Carlo cross-validator.

High-level helpers are exposed for quick consumption.

Example:
    >>> from thzhybrid import load_config, to_params, coverage_hybrid
    >>> params = to_params(load_config())
    >>> coverage_hybrid(100.0, params)
"""

from pathlib import Path
from typing import List, Optional

# Semantic versioning (sync with requirements/metadata if packaging is added)
__version__: str = "0.1.0"

from .analysis import (  # noqa: E402
    association_prob_mmwave,
    association_prob_thz,
    coverage_hybrid,
    coverage_mmwave_standalone,
    coverage_thz_standalone,
    epsilon,
    se_hybrid,
    se_mmwave,
    se_thz,
)
from .cli import run, validate  # noqa: E402  re-export Typer callback functions
from .config import load_config, to_params  # noqa: E402
from .errors import (  # noqa: E402
    ConfigError,
    ConvergenceError,
    DegenerateTierError,
    DomainError,
    SweepError,
    ThzHybridError,
)
from .montecarlo import estimate_association, estimate_coverage, estimate_se, realize_network  # noqa: E402
from .schema import Engines, HybridParams, Metric, Mode, RunConfig, TierParams  # noqa: E402

__all__: List[str] = [
    "ConfigError",
    "ConvergenceError",
    "DegenerateTierError",
    "DomainError",
    "HybridParams",
    "Metric",
    "Mode",
    "RunConfig",
    "SweepError",
    "ThzHybridError",
    "TierParams",
    "association_prob_mmwave",
    "association_prob_thz",
    "coverage_hybrid",
    "coverage_mmwave_standalone",
    "coverage_thz_standalone",
    "epsilon",
    "estimate_association",
    "estimate_coverage",
    "estimate_se",
    "load_config",
    "realize_network",
    "run",
    "run_experiment",
    "se_hybrid",
    "se_mmwave",
    "se_thz",
    "to_params",
    "validate",
    "validate_config",
]

# Convenience wrappers -----------------------------------------------------


def run_experiment(
    out: str | Path,
    metric: Metric | str,
    config: Optional[str | Path] = None,
    sweep: Optional[str] = None,
    tau_db: Optional[str] = None,
    engines: str = "both",
    trials: Optional[int] = None,
    seed: Optional[int] = None,
) -> None:
    """Programmatic wrapper around :pyfunc:`thzhybrid.cli.run` command."""
    run(
        out=Path(out),
        metric=Metric(metric),
        config=Path(config) if config else None,
        sweep=sweep,
        tau_db=tau_db,
        engines=Engines(engines),
        trials=trials,
        seed=seed,
        workers=None,
        verbose=0,
    )


def validate_config(config: Optional[str | Path] = None) -> None:
    """Programmatic wrapper around :pyfunc:`thzhybrid.cli.validate` command."""
    validate(config=Path(config) if config else None, verbose=0)
