"""Scenario constants derived once per :class:`HybridParams`.

``HybridParams`` is frozen and hashable, so the cache below is keyed on the
scenario itself and its entries are immutable.
"""
from __future__ import annotations

import logging
import math
from functools import lru_cache

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import special

from ..antenna import build_mlft
from ..channel import absorption_coefficient, johnson_nyquist_noise_density, reference_gain
from ..schema import HybridParams, MlftPattern, NormalizedNoise, TierParams

logger = logging.getLogger(__name__)


class DerivedQuantities(BaseModel):
    model_config = ConfigDict(frozen=True)

    log_epsilon: float
    k_a: float
    thz_pattern: MlftPattern
    mm_pattern: MlftPattern
    noise: NormalizedNoise
    alzer_a: float

    @property
    def epsilon(self) -> float:
        return math.exp(self.log_epsilon)


def _log_budget(tier: TierParams) -> float:
    """ln(B·P·N·(c/4πf)²), the biased boresight budget of a tier."""
    return (
        math.log(tier.bias)
        + math.log(tier.tx_power)
        + math.log(tier.array_size)
        + math.log(reference_gain(tier.frequency))
    )


def log_epsilon(params: HybridParams) -> float:
    return _log_budget(params.mmwave) - _log_budget(params.thz)


def epsilon(params: HybridParams) -> float:
    """``ε = (B_m P_m N_m / B_T P_T N_T)·(f_T / f_m)²``, formed in log space."""
    return math.exp(log_epsilon(params))


def alzer_constant(m: int) -> float:
    """``a = M·(M!)^{-1/M}``."""
    return m * math.exp(-special.gammaln(m + 1) / m)


def normalized_noise(params: HybridParams) -> NormalizedNoise:
    thz, mm = params.thz, params.mmwave
    n_jn = johnson_nyquist_noise_density(thz.frequency, params.environment.temperature)
    return NormalizedNoise(
        thz_hat_n=n_jn / (thz.tx_power * thz.array_size * reference_gain(thz.frequency)),
        mm_sigma2=params.mmwave_noise_power / (mm.tx_power * mm.array_size * reference_gain(mm.frequency)),
    )


@lru_cache(maxsize=512)
def derived(params: HybridParams) -> DerivedQuantities:
    k_a = absorption_coefficient(params.thz.frequency, params.absorption)
    out = DerivedQuantities(
        log_epsilon=log_epsilon(params),
        k_a=float(k_a),
        thz_pattern=build_mlft(params.thz.array_size),
        mm_pattern=build_mlft(params.mmwave.array_size),
        noise=normalized_noise(params),
        alzer_a=alzer_constant(params.nakagami_m),
    )
    logger.debug(
        "derived: ε=%.6g k_a=%.6g N̂=%.4g σ²=%.4g",
        out.epsilon,
        out.k_a,
        out.noise.thz_hat_n,
        out.noise.mm_sigma2,
    )
    return out


def binomial_weights(m: int) -> np.ndarray:
    """``C(M, n)·(−1)^{n+1}`` for n = 1..M."""
    n = np.arange(1, m + 1)
    return special.comb(m, n, exact=False) * (-1.0) ** (n + 1)
