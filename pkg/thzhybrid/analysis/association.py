"""Max-BRP association: tier probabilities and serving-distance densities.

A UE joins the THz tier when its nearest THz node offers the larger biased,
fading-averaged received power. With ε the biased budget ratio this reads
``x_m^{α_m} > ε·x_T^{α_T}·e^{k_a x_T}``.
"""
from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import Callable

import numpy as np

from ..errors import DegenerateTierError
from ..schema import AssociationModel, HybridParams, QuadratureSpec
from ..specfun import DEFAULT_QUADRATURE, integrate, lambert_w0
from .derived import derived

logger = logging.getLogger(__name__)

# Below this association probability a tier is not conditioned on.
DEGENERATE_TIER = 1e-12
# πλx² beyond which e^{-πλx²} underflows to zero in double precision.
_UNDERFLOW_EXPONENT = 745.0

Density = Callable[[float], float]


def nearest_distance_pdf(density: float, los_radius: float) -> Density:
    """Truncated Rayleigh density of the nearest node given a non-empty LOS ball."""
    mass = -math.expm1(-density * math.pi * los_radius**2)
    scale = 2.0 * math.pi * density / mass

    def pdf(x):
        xx = np.asarray(x, dtype=float)
        value = np.where((xx >= 0) & (xx <= los_radius), scale * xx * np.exp(-math.pi * density * xx**2), 0.0)
        return float(value) if np.ndim(x) == 0 else value

    return pdf


def support(density: float, los_radius: float) -> float:
    """Upper integration limit: R, or where the nearest-node density underflows."""
    return min(los_radius, math.sqrt(_UNDERFLOW_EXPONENT / (math.pi * density)))


# ---------------------------------------------------------------------------
# Association probability
# ---------------------------------------------------------------------------


def _mm_null_exponent(x, params: HybridParams):
    """πλ_m·ρ(x)² with ρ^{α_m} = ε·x^{α_T}·e^{k_a x}."""
    d = derived(params)
    thz, mm = params.thz, params.mmwave
    xx = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        log_rho2 = (2.0 / mm.pathloss_exponent) * (
            d.log_epsilon + thz.pathloss_exponent * np.log(xx) + d.k_a * xx
        )
        if params.association_model is AssociationModel.LOS_BALL:
            log_rho2 = np.minimum(log_rho2, 2.0 * math.log(mm.los_radius))
        return math.pi * mm.density * np.exp(log_rho2)


def thz_association_numerator(x, params: HybridParams):
    """``f_{x_T}(x)·P(no mmWave node beats the THz node at x)``; integrates to 𝒜_T."""
    pdf = nearest_distance_pdf(params.thz.density, params.thz.los_radius)
    value = pdf(x) * np.exp(-_mm_null_exponent(x, params))
    return float(value) if np.ndim(x) == 0 else value


@lru_cache(maxsize=1024)
def _association_prob_thz(params: HybridParams, spec: QuadratureSpec) -> float:
    upper = support(params.thz.density, params.thz.los_radius)
    value = integrate(
        lambda x: thz_association_numerator(x, params), 0.0, upper, spec, name="THz association probability"
    )
    return min(max(value, 0.0), 1.0)


def association_prob_thz(params: HybridParams, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """𝒜_T, probability that the typical UE is served by the THz tier."""
    return _association_prob_thz(params, spec)


def association_prob_mmwave(params: HybridParams, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    return 1.0 - association_prob_thz(params, spec)


# ---------------------------------------------------------------------------
# Conditioned serving distance
# ---------------------------------------------------------------------------


def nu(x_hat, params: HybridParams):
    """THz distance whose biased power equals an mmWave node at *x_hat*.

    Solves ``ε·r^{α_T}·e^{k_a r} = x̂^{α_m}`` through the Lambert W function;
    without absorption the root is the plain power law.
    """
    d = derived(params)
    a_t, a_m = params.thz.pathloss_exponent, params.mmwave.pathloss_exponent
    xx = np.asarray(x_hat, dtype=float)
    with np.errstate(divide="ignore"):
        log_base = (a_m * np.log(xx) - d.log_epsilon) / a_t
    base = np.exp(log_base)
    if d.k_a == 0:
        r = base
    else:
        r = (a_t / d.k_a) * np.asarray(lambert_w0((d.k_a / a_t) * base))
    return float(r) if np.ndim(x_hat) == 0 else r


def mm_association_numerator(x, params: HybridParams):
    """``f_{x_m}(x)·e^{−πλ_T ν(x)²}``."""
    pdf = nearest_distance_pdf(params.mmwave.density, params.mmwave.los_radius)
    r = np.asarray(nu(x, params))
    if params.association_model is AssociationModel.LOS_BALL:
        r = np.minimum(r, params.thz.los_radius)
    value = pdf(x) * np.exp(-math.pi * params.thz.density * r**2)
    return float(value) if np.ndim(x) == 0 else value


@lru_cache(maxsize=1024)
def _mm_numerator_mass(params: HybridParams, spec: QuadratureSpec) -> float:
    upper = support(params.mmwave.density, params.mmwave.los_radius)
    return integrate(
        lambda x: mm_association_numerator(x, params), 0.0, upper, spec, name="mmWave serving-distance mass"
    )


def conditioned_distance_pdf_thz(params: HybridParams, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> Density:
    """Serving distance density given THz association, ``f_{X_T}``."""
    a_t = association_prob_thz(params, spec)
    if a_t < DEGENERATE_TIER:
        raise DegenerateTierError(f"THz association probability {a_t:.3g} is degenerate")

    def pdf(x):
        return thz_association_numerator(x, params) / a_t

    return pdf


def conditioned_distance_pdf_mmwave(params: HybridParams, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> Density:
    """Serving distance density given mmWave association, ``f_{X_m}``.

    Normalised by its own mass on ``[0, R_m]``, which differs from 𝒜_m once
    the LOS balls are finite.
    """
    a_m = association_prob_mmwave(params, spec)
    if a_m < DEGENERATE_TIER:
        raise DegenerateTierError(f"mmWave association probability {a_m:.3g} is degenerate")
    mass = _mm_numerator_mass(params, spec)
    if mass <= 0:
        raise DegenerateTierError("mmWave serving-distance density has no mass")
    logger.debug("f_{X_m} mass %.6g vs 𝒜_m %.6g", mass, a_m)

    def pdf(x):
        return mm_association_numerator(x, params) / mass

    return pdf
