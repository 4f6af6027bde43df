"""Uniform-linear-array gain and its multi-level flat-top (MLFT) approximation.

Angles are cosine directions φ ∈ [-1/2, 1/2]. An interferer's direction is
uniform on that interval, which turns every MLFT level into a gain that is
seen with probability 2ψ.
"""
from __future__ import annotations

import logging
from functools import lru_cache
from typing import List, Tuple

import numpy as np
from scipy import optimize

from .schema import GainModel, MlftPattern

logger = logging.getLogger(__name__)

# |sin(πφ)| below this is treated as the removable singularity of the array factor.
_BORESIGHT_EPS = 1e-9


def actual_gain(phi, n_elements: int):
    """Array gain ``sin²(πNφ) / (N·sin²(πφ))`` (scalar or array *phi*)."""
    phi_arr = np.asarray(phi, dtype=float)
    s = np.sin(np.pi * phi_arr)
    near = np.abs(s) < _BORESIGHT_EPS
    safe = np.where(near, 1.0, s)
    gain = np.where(near, float(n_elements), np.sin(np.pi * n_elements * phi_arr) ** 2 / (n_elements * safe**2))
    return float(gain) if np.ndim(phi) == 0 else gain


def solve_hpbw(n_elements: int) -> float:
    """Half-power beamwidth ψ: the root of ``G_act(ψ) = N/2`` in ``(0, 1/N)``."""
    half = n_elements / 2.0
    return float(
        optimize.bisect(lambda p: actual_gain(p, n_elements) - half, 0.0, 1.0 / n_elements, xtol=1e-12)
    )


@lru_cache(maxsize=None)
def build_mlft(n_elements: int) -> MlftPattern:
    """MLFT pattern with ``floor(N/2)`` levels; cached per array size."""
    psi = solve_hpbw(n_elements)
    levels: List[Tuple[float, float]] = [(psi / 2.0, float(n_elements))]
    for k in range(2, n_elements // 2 + 1):
        center = (2 * k - 1) / (2.0 * n_elements)
        levels.append((center, actual_gain(center, n_elements)))
    pattern = MlftPattern(n_elements=n_elements, hpbw=psi, levels=tuple(levels))
    logger.debug("MLFT N=%d: ψ=%.6g, %d levels", n_elements, psi, pattern.n_levels)
    return pattern


def mlft_gain(pattern: MlftPattern, phi):
    """Flat-top gain at *phi*; bins are ``[φ_k − ψ/2, φ_k + ψ/2)`` in ``|φ|``."""
    a = np.abs(np.asarray(phi, dtype=float))[..., None]
    half = pattern.hpbw / 2.0
    centers = pattern.centers
    inside = (a >= centers - half) & (a < centers + half)
    gain = np.where(inside, pattern.gains, 0.0).sum(axis=-1)
    return float(gain) if np.ndim(phi) == 0 else gain


def interferer_gain_distribution(pattern: MlftPattern) -> List[Tuple[float, float]]:
    """``[(0, 1 − 2Kψ), (G_1, 2ψ), …, (G_K, 2ψ)]``."""
    p_level = 2.0 * pattern.hpbw
    p_zero = 1.0 - pattern.n_levels * p_level
    return [(0.0, p_zero)] + [(g, p_level) for g in pattern.gains.tolist()]


def sample_interferer_gains(
    rng: np.random.Generator,
    pattern: MlftPattern,
    size: int,
    model: GainModel = GainModel.DISCRETE,
) -> np.ndarray:
    """Draw *size* interferer gains under the requested *model*."""
    if model is GainModel.ACTUAL:
        return actual_gain(rng.uniform(-0.5, 0.5, size=size), pattern.n_elements)
    gains, probs = zip(*interferer_gain_distribution(pattern))
    probs = np.asarray(probs)
    return rng.choice(np.asarray(gains), size=size, p=probs / probs.sum())
