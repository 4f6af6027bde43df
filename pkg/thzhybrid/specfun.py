"""Numerical kernel shared by every analytic expression.

Gauss hypergeometric function on the negative real axis, the principal branch
of Lambert W, and adaptive quadrature on finite and semi-infinite intervals.
All functions are pure.
"""
from __future__ import annotations

import logging
import math
from typing import Callable

import numpy as np
from scipy import integrate as _integrate
from scipy import special

from .errors import ConvergenceError, DomainError
from .schema import QuadratureSpec

logger = logging.getLogger(__name__)

DEFAULT_QUADRATURE = QuadratureSpec()

_HALLEY_MAX_ITER = 50
_LAMBERT_RESIDUAL = 1e-12
# |a − b| within this of an integer counts as integer for the 1/z connection.
_INTEGER_GAP = 1e-9


def _scalar_or_array(values: np.ndarray, like) -> float | np.ndarray:
    return float(values) if np.ndim(like) == 0 else values


# ---------------------------------------------------------------------------
# Special functions
# ---------------------------------------------------------------------------


def _pfaff(a: float, b: float, c: float, z: np.ndarray) -> np.ndarray:
    """₂F₁ for ``-1 ≤ z ≤ 0`` through ``(1-z)^{-a} ₂F₁(a, c-b; c; z/(z-1))``."""
    w = z / (z - 1.0)
    return np.power(1.0 - z, -a) * special.hyp2f1(a, c - b, c, w)


def _reciprocal(a: float, b: float, c: float, z: np.ndarray) -> np.ndarray:
    """₂F₁ for ``z < -1`` and non-integer ``a - b`` through the ``1/z`` connection formula."""
    u, x = -z, 1.0 / z
    out = np.zeros_like(z)
    for p, q in ((a, b), (b, a)):
        coeff = special.gamma(c) * special.gamma(q - p) * special.rgamma(q) * special.rgamma(c - p)
        if coeff != 0.0:
            out += coeff * np.power(u, -p) * _pfaff(p, p - c + 1.0, p - q + 1.0, x)
    return out


def _unit_a_integer(b: int, c: int, u: np.ndarray) -> np.ndarray:
    """₂F₁(1, b; c; −u) for integers ``1 ≤ b < c``.

    Expands the Euler integral over ``F_β(u) = ₂F₁(1, β; β+1; −u)``, which starts
    at ``F_1 = ln(1+u)/u`` and obeys ``F_{β+1} = (β+1)/(βu)·(1 − F_β)``.
    """
    n = c - b
    f = np.where(np.isinf(u), 0.0, np.log1p(u) / u)
    for beta in range(1, b):
        f = (beta + 1) / (beta * u) * (1.0 - f)
    total = np.zeros_like(u)
    for j in range(n):
        total += (-1) ** j * special.comb(n - 1, j, exact=True) * f / (b + j)
        f = (b + j + 1) / ((b + j) * u) * (1.0 - f)
    return total / special.beta(b, n)


def _is_integer(v: float) -> bool:
    return abs(v - round(v)) <= _INTEGER_GAP


def _large_argument(a: float, b: float, c: float, z: np.ndarray) -> np.ndarray:
    if not _is_integer(a - b):
        return _reciprocal(a, b, c, z)
    if round(a) != 1 or not _is_integer(a):
        a, b = b, a
    if (
        _is_integer(a) and round(a) == 1
        and _is_integer(b) and _is_integer(c)
        and 1 <= round(b) < round(c)
    ):
        return _unit_a_integer(int(round(b)), int(round(c)), -z)
    raise ConvergenceError(
        f"2F1({a:g}, {b:g}; {c:g}; z)", "integer a-b with z < -1 has no stable evaluation here"
    )


def gauss_2f1(a: float, b: float, c: float, z):
    """₂F₁(a, b; c; z) for real ``z ≤ 0`` (scalar or array).

    On ``[-1, 0]`` the Pfaff transformation moves the argument into ``[0, 1/2]``
    where :func:`scipy.special.hyp2f1` is accurate. Below −1 the ``1/z``
    connection formula applies; when ``a − b`` is an integer it degenerates, and
    the ``a = 1`` family with integer ``b < c`` is summed in elementary form.
    """
    if c <= 0 and float(c).is_integer():
        raise DomainError(f"2F1 undefined for non-positive integer c={c:g}")
    zz = np.asarray(z, dtype=float)
    if np.any(zz > 0) or np.any(np.isnan(zz)):
        raise DomainError("gauss_2f1 expects real z <= 0")

    flat = np.atleast_1d(zz).ravel()
    value = np.empty_like(flat)
    near = flat >= -1.0
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        if np.any(near):
            value[near] = _pfaff(a, b, c, flat[near])
        if not np.all(near):
            value[~near] = _large_argument(a, b, c, flat[~near])
    value = value.reshape(zz.shape)

    if not np.all(np.isfinite(value)):
        bad = zz[~np.isfinite(value)] if zz.ndim else zz
        raise ConvergenceError(
            f"2F1({a:g}, {b:g}; {c:g}; z)", f"non-finite value at z={np.min(bad):.6g}"
        )
    return _scalar_or_array(value, z)


def lambert_w0(x):
    """Principal branch W₀ for ``x ≥ 0`` (scalar or array).

    :func:`scipy.special.lambertw` seeds the iteration, Halley steps polish the
    result until ``|w·e^w − x| ≤ 1e-12·x``.
    """
    xx = np.asarray(x, dtype=float)
    if np.any(xx < 0) or np.any(~np.isfinite(xx)):
        raise DomainError("lambert_w0 expects finite x >= 0")

    w = np.real(special.lambertw(xx)).astype(float)
    for _ in range(_HALLEY_MAX_ITER):
        ew = np.exp(w)
        f = w * ew - xx
        done = np.abs(f) <= _LAMBERT_RESIDUAL * xx
        if np.all(done):
            return _scalar_or_array(w, x)
        wp1 = w + 1.0
        step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w = np.where(done, w, w - step)

    raise ConvergenceError("lambert_w0", f"Halley iteration exceeded {_HALLEY_MAX_ITER} steps")


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    name: str = "integral",
) -> float:
    """Adaptive Gauss–Kronrod estimate of ``∫_a^b f``.

    *name* labels the integral in :class:`~thzhybrid.errors.ConvergenceError`
    messages, which the CLI surfaces verbatim.
    """
    if b < a:
        raise DomainError(f"{name}: lower limit {a:g} exceeds upper limit {b:g}")
    if a == b:
        return 0.0

    out = _integrate.quad(
        f,
        a,
        b,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_subdivisions,
        full_output=1,
    )
    value, abserr, info = out[0], out[1], out[2]
    if not math.isfinite(value):
        raise ConvergenceError(name, f"non-finite result on [{a:g}, {b:g}]")
    if len(out) > 3:
        if info.get("last", 0) >= spec.max_subdivisions:
            raise ConvergenceError(
                name,
                f"{spec.max_subdivisions} subdivisions exhausted on [{a:g}, {b:g}] "
                f"(error estimate {abserr:.3g})",
            )
        tolerance = max(spec.abs_tol, spec.rel_tol * abs(value))
        if abserr > 10 * tolerance:
            raise ConvergenceError(name, str(out[3]).strip().splitlines()[0])
        logger.debug("%s: quadpack warning accepted (error %.3g)", name, abserr)
    return float(value)


def integrate_semi_infinite(
    f: Callable[[float], float],
    a: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    name: str = "integral",
    first_width: float = 1.0,
) -> float:
    """``∫_a^∞ f`` for an eventually decaying integrand.

    Consecutive segments double in width. Once a segment contributes no more
    than ``tail_cutoff_tol`` of the running total, the next doubled segment is
    integrated as a check; the integral stops when the check is also below the
    cutoff.
    """
    total = 0.0
    lo, width = float(a), float(first_width)
    below_cutoff = False
    for _ in range(spec.max_doublings):
        hi = lo + width
        piece = integrate(f, lo, hi, spec, name)
        total += piece
        if abs(piece) <= spec.tail_cutoff_tol * abs(total):
            if below_cutoff:
                logger.debug("%s: truncated at %.6g", name, hi)
                return total
            below_cutoff = True
        else:
            below_cutoff = False
        lo, width = hi, 2.0 * width

    raise ConvergenceError(
        name, f"no decay detected after {spec.max_doublings} interval doublings"
    )
