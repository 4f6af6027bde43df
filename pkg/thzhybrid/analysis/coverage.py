"""SINR coverage probability of each tier and of the hybrid network.

THz coverage uses Alzer's bound on the normalised Gamma CDF, which turns the
Nakagami-M fading into an alternating sum of M Laplace-transform integrals.
mmWave coverage is exact under Rayleigh fading.
"""
from __future__ import annotations

import logging
import math
from typing import Callable

import numpy as np

from ..errors import DegenerateTierError, DomainError
from ..schema import HybridParams, QuadratureSpec, Tier
from ..specfun import DEFAULT_QUADRATURE, integrate
from .association import (
    DEGENERATE_TIER,
    association_prob_thz,
    conditioned_distance_pdf_mmwave,
    nearest_distance_pdf,
    support,
    thz_association_numerator,
)
from .derived import binomial_weights, derived
from .laplace import laplace_interference_mmwave, laplace_interference_thz

logger = logging.getLogger(__name__)

# Clamping larger than this is reported.
_CLAMP_REPORT = 1e-6


def _clamp_probability(value: float, label: str) -> float:
    clamped = min(max(value, 0.0), 1.0)
    if abs(clamped - value) > _CLAMP_REPORT:
        logger.warning("%s = %.9g lies outside [0, 1]; clamped", label, value)
    return clamped


def _thz_alzer_sum(
    tau: float,
    params: HybridParams,
    weight: Callable[[float], float],
    spec: QuadratureSpec,
    label: str,
) -> float:
    """``Σ_n C(M,n)(−1)^{n+1} ∫ weight(x)·e^{−P_n(x)N̂}·𝓛_Ĵ(P_n(x)) dx`` (unclamped)."""
    d = derived(params)
    alpha, k_a = params.thz.pathloss_exponent, d.k_a
    n_hat = d.noise.thz_hat_n
    upper = support(params.thz.density, params.thz.los_radius)

    total = 0.0
    for n, w in enumerate(binomial_weights(params.nakagami_m), start=1):
        coef = d.alzer_a * n * tau

        def integrand(x: float, coef: float = coef) -> float:
            p_n = coef * x**alpha * math.exp(k_a * x)
            return weight(x) * math.exp(-p_n * n_hat) * laplace_interference_thz(p_n, x, params)

        total += w * integrate(integrand, 0.0, upper, spec, name=f"{label} (Alzer term n={n})")
    return total


def coverage_thz_standalone(tau: float, params: HybridParams, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Coverage of a THz-only network at linear SINR threshold *tau*.

    Alzer's bound under-estimates the fading CDF, so the result bounds the exact
    coverage from above.
    """
    if tau <= 0:
        raise DomainError("SINR threshold must be positive")
    pdf = nearest_distance_pdf(params.thz.density, params.thz.los_radius)
    value = _thz_alzer_sum(tau, params, pdf, spec, "THz coverage")
    return _clamp_probability(value, f"THz coverage at τ={tau:g}")


def _mm_coverage_integral(
    tau: float, params: HybridParams, pdf: Callable[[float], float], spec: QuadratureSpec, label: str
) -> float:
    alpha = params.mmwave.pathloss_exponent
    sigma2 = derived(params).noise.mm_sigma2

    def integrand(x: float) -> float:
        s = tau * x**alpha
        return pdf(x) * math.exp(-s * sigma2) * laplace_interference_mmwave(s, x, params)

    upper = support(params.mmwave.density, params.mmwave.los_radius)
    return integrate(integrand, 0.0, upper, spec, name=label)


def coverage_mmwave_standalone(tau: float, params: HybridParams, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Coverage of an mmWave-only network at linear threshold *tau*."""
    if tau <= 0:
        raise DomainError("SINR threshold must be positive")
    pdf = nearest_distance_pdf(params.mmwave.density, params.mmwave.los_radius)
    value = _mm_coverage_integral(tau, params, pdf, spec, "mmWave coverage")
    return _clamp_probability(value, f"mmWave coverage at τ={tau:g}")


def coverage_mmwave_interference_limited(
    tau: float, params: HybridParams, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """Noise-free mmWave coverage for α_m = 2 in product form.

    ``∫ f_{x_m}(x) Π_k ((x² + q_k)/(R² + q_k))^{2πλψ q_k} dx`` with ``q_k = τx²ĝ_k``.
    """
    mm = params.mmwave
    if mm.pathloss_exponent != 2:
        raise DomainError(f"interference-limited form needs α_m = 2, got {mm.pathloss_exponent:g}")
    if tau <= 0:
        raise DomainError("SINR threshold must be positive")
    pattern = derived(params).mm_pattern
    g_hat = pattern.normalized_gains
    power = 2.0 * math.pi * mm.density * pattern.hpbw
    R2 = mm.los_radius**2
    pdf = nearest_distance_pdf(mm.density, mm.los_radius)

    def integrand(x: float) -> float:
        if x == 0.0:
            return 0.0
        q = tau * x * x * g_hat
        log_product = float(np.sum(power * q * (np.log(x * x + q) - np.log(R2 + q))))
        return pdf(x) * math.exp(log_product)

    upper = support(mm.density, mm.los_radius)
    value = integrate(integrand, 0.0, upper, spec, name="interference-limited mmWave coverage")
    return _clamp_probability(value, f"interference-limited mmWave coverage at τ={tau:g}")


# ---------------------------------------------------------------------------
# Hybrid network
# ---------------------------------------------------------------------------


def _thz_share(tau: float, params: HybridParams, a_t: float, spec: QuadratureSpec) -> float:
    """𝒜_T·P_{C_T}(τ), integrated in the cancelled form."""
    if a_t < DEGENERATE_TIER:
        return 0.0
    value = _thz_alzer_sum(
        tau, params, lambda x: thz_association_numerator(x, params), spec, "hybrid THz coverage"
    )
    return a_t * _clamp_probability(value / a_t, f"THz-conditioned coverage at τ={tau:g}")


def _mm_conditioned(tau: float, params: HybridParams, a_m: float, spec: QuadratureSpec) -> float:
    """P_{C_m}(τ), or 0 when the mmWave tier is never selected."""
    if a_m < DEGENERATE_TIER:
        return 0.0
    try:
        pdf = conditioned_distance_pdf_mmwave(params, spec)
    except DegenerateTierError as exc:
        logger.info("mmWave tier skipped: %s", exc)
        return 0.0
    value = _mm_coverage_integral(tau, params, pdf, spec, "hybrid mmWave coverage")
    return _clamp_probability(value, f"mmWave-conditioned coverage at τ={tau:g}")


def coverage_conditioned(
    tau: float, params: HybridParams, tier: Tier, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """Coverage given that the UE is served by *tier*."""
    a_t = association_prob_thz(params, spec)
    if tier is Tier.THZ:
        if a_t < DEGENERATE_TIER:
            raise DegenerateTierError(f"THz association probability {a_t:.3g} is degenerate")
        return _thz_share(tau, params, a_t, spec) / a_t
    if 1.0 - a_t < DEGENERATE_TIER:
        raise DegenerateTierError(f"mmWave association probability {1.0 - a_t:.3g} is degenerate")
    return _mm_conditioned(tau, params, 1.0 - a_t, spec)


def coverage_hybrid(tau: float, params: HybridParams, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """``𝒜_T·P_{C_T}(τ) + 𝒜_m·P_{C_m}(τ)``."""
    if tau <= 0:
        raise DomainError("SINR threshold must be positive")
    a_t = association_prob_thz(params, spec)
    a_m = 1.0 - a_t
    value = _thz_share(tau, params, a_t, spec) + a_m * _mm_conditioned(tau, params, a_m, spec)
    return _clamp_probability(value, f"hybrid coverage at τ={tau:g}")
