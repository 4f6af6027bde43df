"""Exception hierarchy shared by the numerical kernel, the simulator and the CLI.

The CLI maps these onto exit codes (see :mod:`thzhybrid.cli`).
"""
from __future__ import annotations

from typing import Dict, Optional


class ThzHybridError(Exception):
    """Base-class for every error raised on purpose by this package."""


class DomainError(ThzHybridError, ValueError):
    """An argument lies outside the domain where an expression is defined."""


class DegenerateTierError(DomainError):
    """A tier's association probability is too small to condition on."""


class ConvergenceError(ThzHybridError, RuntimeError):
    """A series or quadrature did not reach its tolerance within budget."""

    def __init__(self, integral: str, detail: str = ""):
        self.integral = integral
        self.detail = detail
        msg = f"{integral} did not converge"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)


class ConfigError(ThzHybridError):
    """Malformed or invalid run configuration.

    *diagnostics* maps each offending key to a human-readable message.
    """

    def __init__(self, diagnostics: Dict[str, str], source: Optional[str] = None):
        self.diagnostics = dict(diagnostics)
        self.source = source
        where = f" in {source}" if source else ""
        lines = [f"{k}: {v}" for k, v in self.diagnostics.items()]
        super().__init__(f"invalid configuration{where}:\n  " + "\n  ".join(lines))


class SweepError(ThzHybridError):
    """Invalid sweep specification (bad key, empty values, metric/engine mismatch)."""
