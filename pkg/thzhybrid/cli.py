"""Typer-powered CLI for the THz/mmWave hybrid network analysis engine.

Usage examples.
--------------

Print the effective scenario with its unit-converted internal values::

    python -m thzhybrid validate --config scenario.cfg

THz coverage against the SINR threshold, both engines::

    python -m thzhybrid run --metric coverage_thz --tau-db -10,0,10,20,30,40 \\
        --sweep array_size_thz=8,16,32,64 --out out/coverage_thz.csv

Absorption coefficient over the 275-400 GHz band (analytic only)::

    python -m thzhybrid run --metric absorption_coefficient --engines analytic \\
        --sweep "frequency_thz=275GHz:400GHz:251" --out out/absorption.csv

Exit codes: 1 malformed configuration (or a failed selftest), 2 invalid
sweep, 3 numerical non-convergence.
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.progress import Progress
from rich.table import Table

from . import __version__
from .config import load_config, resolved_view, with_override
from .errors import ConfigError, ConvergenceError, DomainError, SweepError
from .schema import Engines, Metric, RunConfig
from .selftest import CHECKS, run_selftest
from .sweep import build_sweep, run_sweep, write_csv, write_metadata

app = typer.Typer(add_completion=False, help="THz/mmWave hybrid network analysis and Monte Carlo CLI.")

console = Console()
err_console = Console(stderr=True)

EXIT_CONFIG, EXIT_SWEEP, EXIT_CONVERGENCE = 1, 2, 3

# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _setup_logging(verbose: int) -> None:
    level = logging.DEBUG if verbose >= 2 else logging.INFO if verbose == 1 else logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def _fail(message: str, code: int) -> typer.Exit:
    err_console.print(f"[bold red]Error:[/] {message}", highlight=False)
    return typer.Exit(code)


def _load(
    config: Optional[Path],
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> RunConfig:
    try:
        cfg = load_config(config)
        for key, value in (("n_trials", trials), ("master_seed", seed), ("workers", workers)):
            if value is not None:
                cfg = with_override(cfg, key, value)
    except ConfigError as exc:
        raise _fail(str(exc), EXIT_CONFIG) from exc
    return cfg


_CONFIG_OPTION = typer.Option(None, "--config", "-c", exists=True, dir_okay=False, help="Flat key = value scenario file.")
_VERBOSE_OPTION = typer.Option(0, "--verbose", "-v", count=True, help="-v for INFO, -vv for DEBUG logging.")

# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


@app.command()
def run(
    out: Path = typer.Option(..., "--out", "-o", dir_okay=False, help="CSV output path."),
    metric: Metric = typer.Option(..., "--metric", "-m", help="Quantity to evaluate."),
    config: Optional[Path] = _CONFIG_OPTION,
    sweep: Optional[str] = typer.Option(None, "--sweep", help="KEY=v1,v2,... or KEY=start:stop:steps[:lin|log|db]."),
    tau_db: Optional[str] = typer.Option(None, "--tau-db", help="Comma-separated SINR thresholds in dB."),
    engines: Engines = typer.Option(Engines.BOTH, "--engines", help="analytic, mc or both."),
    trials: Optional[int] = typer.Option(None, "--trials", help="Monte Carlo trials per sweep point."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed (unsigned 64-bit)."),
    workers: Optional[int] = typer.Option(None, "--workers", help="Monte Carlo worker processes."),
    verbose: int = _VERBOSE_OPTION,
):
    """Evaluate *METRIC* along a sweep and write one CSV row per point and threshold."""
    _setup_logging(verbose)
    cfg = _load(config, trials, seed, workers)
    try:
        spec = build_sweep(sweep, metric, tau_db, engines)
        with Progress(console=err_console, transient=True) as progress:
            task = progress.add_task(f"[green]{metric.value}", total=len(spec.points))
            rows = run_sweep(cfg, spec, advance=lambda: progress.advance(task))
    except SweepError as exc:
        raise _fail(str(exc), EXIT_SWEEP) from exc
    except ConvergenceError as exc:
        raise _fail(str(exc), EXIT_CONVERGENCE) from exc
    except DomainError as exc:
        raise _fail(str(exc), EXIT_CONFIG) from exc

    write_csv(rows, out)
    meta = write_metadata(cfg, spec, out, __version__)
    logging.getLogger(__name__).info("Run metadata in %s", meta)
    err_console.print(f"[bold green]✓ {len(rows)} row(s) written to {out}")


@app.command()
def validate(
    config: Optional[Path] = _CONFIG_OPTION,
    verbose: int = _VERBOSE_OPTION,
):
    """Print the effective configuration (defaults merged) and its internal SI values."""
    _setup_logging(verbose)
    cfg = _load(config)
    view = resolved_view(cfg)

    table = Table(title="Effective configuration")
    table.add_column("key")
    table.add_column("value", justify="right")
    for key, value in view["config"].items():
        table.add_row(key, str(value))
    console.print(table)

    internal = Table(title="Internal values")
    internal.add_column("quantity")
    internal.add_column("value", justify="right")
    for key, value in view["internal"].items():
        internal.add_row(key, f"{value:.6g}")
    console.print(internal)
    console.print("[bold green]✓ configuration is valid")


@app.command()
def selftest(
    config: Optional[Path] = _CONFIG_OPTION,
    trials: Optional[int] = typer.Option(None, "--trials", help="Monte Carlo trials per check point."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed (unsigned 64-bit)."),
    workers: Optional[int] = typer.Option(None, "--workers", help="Monte Carlo worker processes."),
    verbose: int = _VERBOSE_OPTION,
):
    """Run the acceptance suite; exit 1 if any check fails."""
    _setup_logging(verbose)
    cfg = _load(config, trials, seed, workers)

    table = Table(title=f"selftest (seed {cfg.master_seed}, {cfg.n_trials} trials)")
    table.add_column("check")
    table.add_column("result")
    table.add_column("detail", overflow="fold")
    try:
        with Progress(console=err_console, transient=True) as progress:
            task = progress.add_task("[cyan]Running checks…", total=len(CHECKS))
            results = run_selftest(cfg, advance=lambda _: progress.advance(task))
    except ConvergenceError as exc:
        raise _fail(str(exc), EXIT_CONVERGENCE) from exc

    for r in results:
        table.add_row(r.name, "[green]pass" if r.passed else "[red]FAIL", r.detail)
    console.print(table)
    if not all(r.passed for r in results):
        raise typer.Exit(EXIT_CONFIG)


@app.callback(invoke_without_command=True)
def _main(ctx: typer.Context):  # noqa: D401
    """Entry point when called without subcommand."""
    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())
        ctx.exit()


# Enable `python -m thzhybrid …`
if __name__ == "__main__":  # pragma: no cover
    app()
