"""Laplace transforms of the normalised interference seen by a typical UE.

Interferers of a tier form a PPP on the annulus ``[x, R]`` around the UE. Each
one falls into MLFT level k with probability 2ψ (gain Ĝ_k or ĝ_k) and is
silent otherwise, so the probability generating functional reduces both
transforms to one-dimensional integrals with hypergeometric antiderivatives.

THz links carry Nakagami-M fading, mmWave links Rayleigh fading.
"""
from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy import special

from ..schema import HybridParams, QuadratureSpec, Tier
from ..specfun import DEFAULT_QUADRATURE, gauss_2f1, integrate
from .derived import derived

logger = logging.getLogger(__name__)

# y = u·t^{-α} above which the THz antiderivative switches to its tail form.
_TAIL_SWITCH = 1.0
# Smallest c = 1 − 2/α for which the direct closed form is used.
_MIN_DIRECT_C = 1e-2


def _tier_geometry(params: HybridParams, tier: Tier) -> Tuple[float, float, float, float, np.ndarray]:
    """(λ, R, α, ψ, normalised level gains) of *tier*."""
    d = derived(params)
    tp = params.tier(tier)
    pattern = d.thz_pattern if tier is Tier.THZ else d.mm_pattern
    return tp.density, tp.los_radius, tp.pathloss_exponent, pattern.hpbw, pattern.normalized_gains


def _thz_origin_limit(u: np.ndarray, alpha: float, m: int) -> np.ndarray:
    """``lim_{t→0} t²/2·₂F₁(−2/α, M; 1−2/α; −u t^{-α})``."""
    delta = 2.0 / alpha
    log_c = special.gammaln(1.0 - delta) + special.gammaln(m + delta) - special.gammaln(m)
    return 0.5 * np.exp(log_c) * u**delta


# ---------------------------------------------------------------------------
# THz tier
# ---------------------------------------------------------------------------


def chi_thz(s: float, x: float, params: HybridParams) -> float:
    """``Σ_k ∫_x^R t·(1 + sĜ_k t^{-α}/M)^{-M} dt`` in hypergeometric closed form.

    Undefined at α_T = 2, where the third parameter of ₂F₁ vanishes.
    """
    _, R, alpha, _, g_hat = _tier_geometry(params, Tier.THZ)
    m = params.nakagami_m
    delta = 2.0 / alpha
    u = s * g_hat / m

    def antiderivative(t: float) -> float:
        if t == 0.0:
            return float(np.sum(_thz_origin_limit(u, alpha, m)))
        z = -u * t ** (-alpha)
        return float(np.sum(0.5 * t * t * gauss_2f1(-delta, m, 1.0 - delta, z)))

    return antiderivative(R) - antiderivative(x)


def _thz_h(y: np.ndarray, alpha: float, m: int) -> np.ndarray:
    """Antiderivative of ``t·((1 + y(t))^{-M} − 1)`` divided by t², as a function of y.

    Anchored so that it vanishes at t = 0. Small y uses the direct closed form,
    large y the tail form ``−½ + (1+y)^{1−M}·₂F₁(1, 1+δ; M+1+δ; −1/y) / (α·y·(M+δ))``,
    which has no cancellation as y → ∞ and stays defined at α = 2.
    """
    delta = 2.0 / alpha
    out = np.zeros_like(y)
    live = y > 0
    direct = live & (y <= _TAIL_SWITCH) & (1.0 - delta >= _MIN_DIRECT_C)
    if np.any(direct):
        yd = y[direct]
        log_c = special.gammaln(1.0 - delta) + special.gammaln(m + delta) - special.gammaln(m)
        f = gauss_2f1(-delta, m, 1.0 - delta, -yd)
        out[direct] = 0.5 * (f - 1.0) - 0.5 * np.exp(log_c) * yd**delta
    tail = live & ~direct
    if np.any(tail):
        yt = y[tail]
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            f = gauss_2f1(1.0, 1.0 + delta, m + 1.0 + delta, -1.0 / yt)
            weight = np.power(1.0 + yt, 1.0 - m) / (alpha * yt * (m + delta))
        out[tail] = -0.5 + np.where(np.isfinite(yt), weight * f, 0.0)
    return out


@lru_cache(maxsize=None)
def _note_tail_only(alpha: float) -> None:
    logger.info("α_T=%g: THz Laplace transform evaluated through the tail form only", alpha)


def thz_interference_exponent(s: float, x: float, params: HybridParams) -> float:
    """``ln 𝓛_Ĵ(s)`` for interferers on ``[x, R_T]``."""
    lam, R, alpha, psi, g_hat = _tier_geometry(params, Tier.THZ)
    if s == 0.0 or x >= R:
        return 0.0
    m = params.nakagami_m
    if 1.0 - 2.0 / alpha < _MIN_DIRECT_C:
        _note_tail_only(alpha)
    u = s * g_hat / m

    def bracket(t: float) -> float:
        if t == 0.0:
            return 0.0
        with np.errstate(over="ignore"):
            y = u * t ** (-alpha)
        return t * t * float(np.sum(_thz_h(y, alpha, m)))

    return 4.0 * math.pi * lam * psi * (bracket(R) - bracket(x))


def laplace_interference_thz(s: float, x: float, params: HybridParams) -> float:
    """``𝓛_Ĵ(s) = E[e^{−sĴ}]`` with ``Ĵ = Σ Ĝ_i x_i^{−α_T} g_i`` over ``[x, R_T]``."""
    return math.exp(thz_interference_exponent(s, x, params))


def laplace_interference_thz_numeric(
    s: float, x: float, params: HybridParams, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """Same transform by direct quadrature of the generating-functional integrand."""
    lam, R, alpha, psi, g_hat = _tier_geometry(params, Tier.THZ)
    if s == 0.0 or x >= R:
        return 1.0
    m = params.nakagami_m
    u = s * g_hat / m

    def integrand(t: float) -> float:
        with np.errstate(over="ignore", divide="ignore"):
            return t * float(np.sum(-np.expm1(-m * np.log1p(u * t ** (-alpha)))))

    area = integrate(integrand, x, R, spec, name="THz interference generating functional")
    return math.exp(-4.0 * math.pi * lam * psi * area)


# ---------------------------------------------------------------------------
# mmWave tier
# ---------------------------------------------------------------------------


def chi_mmwave(s: float, x: float, params: HybridParams) -> float:
    """``Σ_k ∫_x^R t / (1 + sĝ_k t^{-α}) dt`` in hypergeometric closed form."""
    _, R, alpha, _, g_hat = _tier_geometry(params, Tier.MMWAVE)
    if s == 0.0:
        return g_hat.size * (R * R - x * x) / 2.0
    delta = 2.0 / alpha
    q = s * g_hat

    def antiderivative(t: float) -> float:
        if t == 0.0:
            return 0.0
        z = -(t**alpha) / q
        return float(np.sum(t ** (alpha + 2) / (q * (alpha + 2)) * gauss_2f1(1.0, 1.0 + delta, 2.0 + delta, z)))

    return antiderivative(R) - antiderivative(x)


def mm_interference_exponent(s: float, x: float, params: HybridParams) -> float:
    """``ln 𝓛_{Î_m}(s) = −4πλψ Σ_k ∫_x^R t / (1 + t^α/(sĝ_k)) dt``."""
    lam, R, alpha, psi, g_hat = _tier_geometry(params, Tier.MMWAVE)
    if s == 0.0 or x >= R:
        return 0.0
    delta = 2.0 / alpha
    q = s * g_hat

    def antiderivative(t: float) -> float:
        if t == 0.0:
            return 0.0
        z = -(t**alpha) / q
        return 0.5 * t * t * float(np.sum(gauss_2f1(1.0, delta, 1.0 + delta, z)))

    return -4.0 * math.pi * lam * psi * (antiderivative(R) - antiderivative(x))


def laplace_interference_mmwave(s: float, x: float, params: HybridParams) -> float:
    """``𝓛_{Î_m}(s)`` with ``Î_m = Σ ĝ_i h_i x_i^{−α_m}`` over ``[x, R_m]``."""
    return math.exp(mm_interference_exponent(s, x, params))


def laplace_interference_mmwave_numeric(
    s: float, x: float, params: HybridParams, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    lam, R, alpha, psi, g_hat = _tier_geometry(params, Tier.MMWAVE)
    if s == 0.0 or x >= R:
        return 1.0
    q = s * g_hat

    def integrand(t: float) -> float:
        return t * float(np.sum(1.0 / (1.0 + t**alpha / q)))

    area = integrate(integrand, x, R, spec, name="mmWave interference generating functional")
    return math.exp(-4.0 * math.pi * lam * psi * area)
