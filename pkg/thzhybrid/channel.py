"""Propagation physics of both tiers.

Simplified water-vapour absorption for 275-400 GHz, free-space pathloss with a
tier-specific exponent, Johnson–Nyquist noise in its Planck form and the
small-scale fading samplers used by the simulator.
"""
from __future__ import annotations

import logging
import math
from typing import Optional

import numpy as np

from .errors import DomainError
from .schema import (
    ABSORPTION_BAND_HZ,
    CONSTANTS,
    AbsorptionSource,
    Environment,
    FixedAbsorption,
)

logger = logging.getLogger(__name__)

# Water-vapour lines: (strength, μ-slope, μ-offset, width μ-slope, width offset, centre in cm⁻¹)
_LINES = (
    (0.2205, 0.1303, 0.0294, 0.4093, 0.0925, 10.835),
    (2.014, 0.1702, 0.0303, 0.537, 0.0956, 12.664),
)
# Equalisation polynomial in f [Hz], highest power first.
_OMEGA = (5.54e-37, -3.94e-25, 9.06e-14, -6.36e-3)


def saturated_vapor_pressure(env: Environment) -> float:
    """Buck equation in Pa; takes kelvin/pascal, evaluates in °C/hPa."""
    t_c = env.temperature - 273.15
    p_hpa = env.pressure / 100.0
    hpa = 6.1121 * (1.0007 + 3.46e-6 * p_hpa) * math.exp(17.502 * t_c / (240.94 + t_c))
    return 100.0 * hpa


def water_vapor_mixing_ratio(env: Environment) -> float:
    """Volume mixing ratio μ = rh · p_w* / p (rh as a fraction)."""
    return env.relative_humidity * saturated_vapor_pressure(env) / env.pressure


def absorption_coefficient(f, source: AbsorptionSource):
    """Molecular absorption coefficient k_a in 1/m (scalar or array *f* in Hz)."""
    if isinstance(source, FixedAbsorption):
        return source.k_a if np.ndim(f) == 0 else np.full(np.shape(f), source.k_a)

    freq = np.asarray(f, dtype=float)
    lo, hi = ABSORPTION_BAND_HZ
    if np.any((freq < lo) | (freq > hi)):
        raise DomainError(
            f"frequency outside the {lo / 1e9:g}-{hi / 1e9:g} GHz validity band "
            "of the simplified absorption model"
        )

    mu = water_vapor_mixing_ratio(source.environment)
    wavenumber = freq / (100.0 * CONSTANTS.c)
    k_a = np.polyval(_OMEGA, freq)
    for strength, slope, offset, w_slope, w_offset, centre in _LINES:
        width = w_slope * mu + w_offset
        k_a = k_a + strength * mu * (slope * mu + offset) / (width**2 + (wavenumber - centre) ** 2)
    return float(k_a) if np.ndim(f) == 0 else k_a


def absorption_loss(k_a: float, x):
    """Transmittance ``e^{−k_a·x}``."""
    return np.exp(-k_a * np.asarray(x, dtype=float)) if np.ndim(x) else math.exp(-k_a * x)


def reference_gain(f: float) -> float:
    """Free-space gain at 1 m, ``(c / 4πf)²``."""
    return (CONSTANTS.c / (4.0 * math.pi * f)) ** 2


def pathloss(f: float, x, alpha: float):
    """``(c/4πf)² · x^{−α}``; *x* must be positive."""
    xx = np.asarray(x, dtype=float)
    if np.any(xx <= 0):
        raise DomainError("pathloss is undefined at distance 0")
    value = reference_gain(f) * xx ** (-alpha)
    return float(value) if np.ndim(x) == 0 else value


def johnson_nyquist_noise_density(f: float, temperature: float) -> float:
    """``h·f / (exp(h·f / k_B·T) − 1)``; tends to ``k_B·T`` as f → 0."""
    hf = CONSTANTS.hbar_planck * f
    return hf / math.expm1(hf / (CONSTANTS.k_boltzmann * temperature))


def sample_nakagami_power(rng: np.random.Generator, m: int, size: Optional[int] = None):
    """Nakagami-m power coefficient, Gamma(m, 1/m) with unit mean."""
    return rng.gamma(m, 1.0 / m, size=size)


def sample_rayleigh_power(rng: np.random.Generator, size: Optional[int] = None):
    """Rayleigh power coefficient, unit-mean exponential."""
    return rng.exponential(1.0, size=size)
