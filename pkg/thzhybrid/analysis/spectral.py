"""Ergodic spectral efficiency E[ln(1 + SINR)] in nats/s/Hz.

Both inner integrals run over ``v = ln(1 + z)`` (THz) or ``v = ln(1 + τ)``
(mmWave) so that their slowly decaying tails become super-exponential.
"""
from __future__ import annotations

import logging
import math

import numpy as np

from ..errors import DegenerateTierError, DomainError
from ..schema import HybridParams, QuadratureSpec
from ..specfun import DEFAULT_QUADRATURE, integrate, integrate_semi_infinite
from .association import (
    DEGENERATE_TIER,
    association_prob_thz,
    conditioned_distance_pdf_mmwave,
    support,
    thz_association_numerator,
)
from .derived import derived
from .laplace import laplace_interference_mmwave, laplace_interference_thz

logger = logging.getLogger(__name__)


def zeta(z, m: int):
    """``ζ(z) = 1/z − 1/(z(1+z)^M)``, equal to M at z = 0."""
    zz = np.asarray(z, dtype=float)
    safe = np.where(zz == 0, 1.0, zz)
    value = np.where(zz == 0, float(m), -np.expm1(-m * np.log1p(safe)) / safe)
    return float(value) if np.ndim(z) == 0 else value


def _zeta_dz_dv(v: float, m: int) -> float:
    """``ζ(e^v − 1)·e^v``, the THz kernel after ``z = e^v − 1``."""
    if v == 0.0:
        return float(m)
    return math.expm1(-m * v) / math.expm1(-v)


def _thz_inner(x: float, params: HybridParams, spec: QuadratureSpec) -> float:
    """``∫_0^∞ ζ(z)·𝓛_Ĵ(η)·e^{−ηN̂} dz`` with ``η = M z e^{k_a x} x^{α_T}``."""
    d = derived(params)
    m = params.nakagami_m
    scale = m * math.exp(d.k_a * x) * x**params.thz.pathloss_exponent
    n_hat = d.noise.thz_hat_n

    def integrand(v: float) -> float:
        eta = scale * math.expm1(v)
        return _zeta_dz_dv(v, m) * laplace_interference_thz(eta, x, params) * math.exp(-eta * n_hat)

    return integrate_semi_infinite(integrand, 0.0, spec, name="THz spectral efficiency (inner)")


def _thz_share(params: HybridParams, spec: QuadratureSpec) -> float:
    """𝒜_T·C_T in the cancelled form."""
    upper = support(params.thz.density, params.thz.los_radius)

    def outer(x: float) -> float:
        weight = thz_association_numerator(x, params)
        return 0.0 if weight == 0.0 else weight * _thz_inner(x, params, spec)

    return integrate(outer, 0.0, upper, spec, name="THz spectral efficiency")


def se_thz(params: HybridParams, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Spectral efficiency given THz association (exact, no Alzer bound)."""
    a_t = association_prob_thz(params, spec)
    if a_t < DEGENERATE_TIER:
        raise DegenerateTierError(f"THz association probability {a_t:.3g} is degenerate")
    return _thz_share(params, spec) / a_t


def _mm_inner(x: float, params: HybridParams, spec: QuadratureSpec) -> float:
    """``∫_0^∞ e^{−τσ²x^α}/(1+τ)·𝓛_{Î_m}(τx^α) dτ`` after ``τ = e^v − 1``."""
    scale = x**params.mmwave.pathloss_exponent
    sigma2 = derived(params).noise.mm_sigma2

    def integrand(v: float) -> float:
        s = math.expm1(v) * scale
        return math.exp(-s * sigma2) * laplace_interference_mmwave(s, x, params)

    return integrate_semi_infinite(integrand, 0.0, spec, name="mmWave spectral efficiency (inner)")


def se_mmwave(params: HybridParams, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Spectral efficiency given mmWave association."""
    if derived(params).noise.mm_sigma2 == 0:
        raise DomainError("mmWave spectral efficiency diverges without receiver noise")
    pdf = conditioned_distance_pdf_mmwave(params, spec)
    upper = support(params.mmwave.density, params.mmwave.los_radius)

    def outer(x: float) -> float:
        weight = pdf(x)
        return 0.0 if weight == 0.0 else weight * _mm_inner(x, params, spec)

    return integrate(outer, 0.0, upper, spec, name="mmWave spectral efficiency")


def se_hybrid(params: HybridParams, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """``𝒜_T·C_T + 𝒜_m·C_m``."""
    a_t = association_prob_thz(params, spec)
    a_m = 1.0 - a_t
    thz_part = _thz_share(params, spec) if a_t >= DEGENERATE_TIER else 0.0
    mm_part = 0.0
    if a_m >= DEGENERATE_TIER:
        try:
            mm_part = a_m * se_mmwave(params, spec)
        except DegenerateTierError as exc:
            logger.info("mmWave tier skipped: %s", exc)
    return thz_part + mm_part
