"""Monte Carlo oracle for the hybrid network.

Each trial drops a PPP of base stations in the LOS ball of every active tier,
associates the typical UE by the fading-free biased received power and
evaluates the exact SINR of that snapshot. Trial *i* draws from its own
counter-based stream, so estimates do not depend on how the trials are split
across worker processes.
"""
from __future__ import annotations

import logging
import math
import multiprocessing
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .analysis.derived import derived
from .antenna import sample_interferer_gains
from .channel import (
    absorption_loss,
    johnson_nyquist_noise_density,
    pathloss,
    reference_gain,
    sample_nakagami_power,
    sample_rayleigh_power,
)
from .errors import DomainError
from .schema import Estimate, GainModel, HybridParams, Mode, NodeSet, Realization, Tier, TierParams

logger = logging.getLogger(__name__)

# Smallest trial count accepted by the coverage and SE estimators.
MIN_TRIALS = 100

_NONE, _THZ, _MM = 0, 1, 2
_CODE_TIER = {_THZ: Tier.THZ, _MM: Tier.MMWAVE}


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    """Independent stream of trial *trial_index*."""
    seq = np.random.SeedSequence(master_seed, spawn_key=(trial_index,))
    return np.random.Generator(np.random.Philox(seq))


# ---------------------------------------------------------------------------
# One realization
# ---------------------------------------------------------------------------


def _empty_nodes() -> NodeSet:
    return NodeSet(distances=np.empty(0), gains=np.empty(0), fading=np.empty(0))


def _drop_nodes(
    rng: np.random.Generator, params: HybridParams, tier: Tier, gain_model: GainModel
) -> NodeSet:
    """Nodes of *tier* in its LOS ball; the nearest one is the tier's serving candidate."""
    tp = params.tier(tier)
    d = derived(params)
    count = int(rng.poisson(tp.density * math.pi * tp.los_radius**2))
    # 1 − U lies in (0, 1], so no node sits on the UE.
    distances = tp.los_radius * np.sqrt(1.0 - rng.random(count))
    if count == 0:
        return _empty_nodes()
    nearest = int(np.argmin(distances))
    pattern = d.thz_pattern if tier is Tier.THZ else d.mm_pattern
    gains = sample_interferer_gains(rng, pattern, count, gain_model)
    gains[nearest] = float(tp.array_size)
    if tier is Tier.THZ:
        fading = sample_nakagami_power(rng, params.nakagami_m, size=count)
    else:
        fading = sample_rayleigh_power(rng, size=count)
    return NodeSet(distances=distances, gains=gains, fading=fading, nearest=nearest)


def _log_biased_power(tp: TierParams, x: float, k_a: float) -> float:
    """ln(B·P·N·L_P(x)·L_A(x)) of the nearest node, averaged over fading."""
    return (
        math.log(tp.bias * tp.tx_power * tp.array_size)
        + math.log(reference_gain(tp.frequency))
        - tp.pathloss_exponent * math.log(x)
        - k_a * x
    )


def _associate(params: HybridParams, thz: NodeSet, mm: NodeSet) -> Optional[Tier]:
    if thz.nearest is None and mm.nearest is None:
        return None
    if mm.nearest is None:
        return Tier.THZ
    if thz.nearest is None:
        return Tier.MMWAVE
    k_a = derived(params).k_a
    p_thz = _log_biased_power(params.thz, float(thz.distances[thz.nearest]), k_a)
    p_mm = _log_biased_power(params.mmwave, float(mm.distances[mm.nearest]), 0.0)
    return Tier.THZ if p_thz > p_mm else Tier.MMWAVE


def _interferers(nodes: NodeSet) -> np.ndarray:
    mask = np.ones(nodes.size, dtype=bool)
    mask[nodes.nearest] = False
    return mask


def unabsorbed_interference(params: HybridParams, nodes: NodeSet) -> float:
    """``Σ G_i·P_T·L_P(x_i)·g_i`` over the THz interferers, before absorption."""
    tp = params.thz
    others = _interferers(nodes)
    terms = nodes.gains[others] * tp.tx_power * pathloss(tp.frequency, nodes.distances[others], tp.pathloss_exponent)
    return float(np.sum(terms * nodes.fading[others]))


def thz_link_budget(params: HybridParams, nodes: NodeSet) -> Tuple[float, float, float]:
    """(signal, absorbed interference, absorption noise) of a THz-served snapshot."""
    tp = params.thz
    k_a = derived(params).k_a
    received = nodes.gains * tp.tx_power * pathloss(tp.frequency, nodes.distances, tp.pathloss_exponent) * nodes.fading
    transmittance = absorption_loss(k_a, nodes.distances)
    others = _interferers(nodes)
    signal = float(received[nodes.nearest] * transmittance[nodes.nearest])
    interference = float(np.sum(received[others] * transmittance[others]))
    absorption_noise = float(np.sum(received[others] * (1.0 - transmittance[others])))
    return signal, interference, absorption_noise


def mm_link_budget(params: HybridParams, nodes: NodeSet) -> Tuple[float, float]:
    """(signal, interference) of an mmWave-served snapshot."""
    tp = params.mmwave
    received = nodes.gains * tp.tx_power * pathloss(tp.frequency, nodes.distances, tp.pathloss_exponent) * nodes.fading
    others = _interferers(nodes)
    return float(received[nodes.nearest]), float(np.sum(received[others]))


def realize_network(
    rng: np.random.Generator,
    params: HybridParams,
    mode: Mode = Mode.HYBRID,
    gain_model: GainModel = GainModel.DISCRETE,
) -> Realization:
    """Draw one network snapshot and evaluate the typical UE's SINR."""
    thz = _drop_nodes(rng, params, Tier.THZ, gain_model) if mode is not Mode.MM_ONLY else _empty_nodes()
    mm = _drop_nodes(rng, params, Tier.MMWAVE, gain_model) if mode is not Mode.THZ_ONLY else _empty_nodes()
    tier = _associate(params, thz, mm)
    if tier is None:
        return Realization(thz_nodes=thz, mm_nodes=mm)

    if tier is Tier.THZ:
        signal, interference, absorption_noise = thz_link_budget(params, thz)
        noise = johnson_nyquist_noise_density(params.thz.frequency, params.environment.temperature)
        sinr = signal / (noise + interference + absorption_noise)
        serving = thz
    else:
        signal, interference = mm_link_budget(params, mm)
        absorption_noise = 0.0
        denominator = params.mmwave_noise_power + interference
        sinr = signal / denominator if denominator > 0 else math.inf
        serving = mm
    return Realization(
        thz_nodes=thz,
        mm_nodes=mm,
        association=tier,
        serving_distance=float(serving.distances[serving.nearest]),
        sinr=sinr,
        interference=interference,
        absorption_noise=absorption_noise,
    )


# ---------------------------------------------------------------------------
# Batches
# ---------------------------------------------------------------------------


class TrialOutcomes(NamedTuple):
    """Per-trial association code (0 none, 1 THz, 2 mmWave) and SINR, in trial order."""

    codes: np.ndarray
    sinr: np.ndarray


_Job = Tuple[int, int, int, HybridParams, Mode, GainModel]


def _simulate_chunk(job: _Job) -> Tuple[np.ndarray, np.ndarray]:
    master_seed, start, stop, params, mode, gain_model = job
    codes = np.zeros(stop - start, dtype=np.int8)
    sinr = np.zeros(stop - start)
    for j, i in enumerate(range(start, stop)):
        r = realize_network(trial_rng(master_seed, i), params, mode, gain_model)
        if r.association is not None:
            codes[j] = _THZ if r.association is Tier.THZ else _MM
            sinr[j] = r.sinr
    return codes, sinr


def simulate(
    master_seed: int,
    params: HybridParams,
    n_trials: int,
    mode: Mode = Mode.HYBRID,
    gain_model: GainModel = GainModel.DISCRETE,
    workers: int = 1,
) -> TrialOutcomes:
    """Run trials ``0..n_trials-1``; outcomes are identical for any *workers*."""
    if n_trials < 1:
        raise DomainError("n_trials must be at least 1")
    workers = max(1, min(workers, n_trials))
    bounds = np.linspace(0, n_trials, workers + 1).astype(int)
    jobs: List[_Job] = [
        (master_seed, int(a), int(b), params, mode, gain_model) for a, b in zip(bounds[:-1], bounds[1:])
    ]
    logger.info("Monte Carlo: %d trials in %d batch(es), mode=%s", n_trials, len(jobs), mode.value)
    if workers == 1:
        parts = [_simulate_chunk(job) for job in jobs]
    else:
        with multiprocessing.Pool(processes=workers) as pool:
            parts = pool.map(_simulate_chunk, jobs)
    codes = np.concatenate([c for c, _ in parts])
    sinr = np.concatenate([s for _, s in parts])
    return TrialOutcomes(codes=codes, sinr=sinr)


# ---------------------------------------------------------------------------
# Estimators
# ---------------------------------------------------------------------------


def _mean_stderr(values: np.ndarray) -> Tuple[float, float]:
    n = values.size
    if n == 0:
        return math.nan, math.nan
    std = float(np.std(values, ddof=1)) if n > 1 else 0.0
    return float(np.mean(values)), std / math.sqrt(n)


def _estimate(values: np.ndarray, codes: np.ndarray, per_tier: bool = True) -> Estimate:
    """Existence-conditioned and unconditional statistics of per-trial *values*."""
    exists = codes != _NONE
    mean, stderr = _mean_stderr(values[exists])
    u_mean, u_stderr = _mean_stderr(values)
    by_tier = {}
    if per_tier:
        for code, tier in _CODE_TIER.items():
            chosen = codes == code
            if np.any(chosen):
                t_mean, t_stderr = _mean_stderr(values[chosen])
                by_tier[tier] = Estimate(
                    mean=t_mean, stderr=t_stderr, n_trials=codes.size, n_conditioned=int(chosen.sum())
                )
    return Estimate(
        mean=mean,
        stderr=stderr,
        n_trials=codes.size,
        n_conditioned=int(exists.sum()),
        unconditional_mean=u_mean,
        unconditional_stderr=u_stderr,
        by_tier=by_tier,
    )


def _check_trials(n_trials: int) -> None:
    if n_trials < MIN_TRIALS:
        raise DomainError(f"need at least {MIN_TRIALS} trials, got {n_trials}")


def estimate_association(
    master_seed: int,
    params: HybridParams,
    n_trials: int,
    gain_model: GainModel = GainModel.DISCRETE,
    workers: int = 1,
) -> Estimate:
    """Fraction of trials served by the THz tier among trials with any server."""
    return association_from_outcomes(simulate(master_seed, params, n_trials, Mode.HYBRID, gain_model, workers))


def association_from_outcomes(outcomes: TrialOutcomes) -> Estimate:
    return _estimate((outcomes.codes == _THZ).astype(float), outcomes.codes, per_tier=False)


def coverage_from_outcomes(outcomes: TrialOutcomes, tau_grid: Sequence[float]) -> List[Estimate]:
    """One coverage estimate per threshold, all on the same realizations."""
    return [_estimate((outcomes.sinr >= tau).astype(float), outcomes.codes) for tau in tau_grid]


def se_from_outcomes(outcomes: TrialOutcomes) -> Estimate:
    return _estimate(np.log1p(outcomes.sinr), outcomes.codes)


def estimate_coverage(
    master_seed: int,
    params: HybridParams,
    tau_grid: Sequence[float],
    n_trials: int,
    mode: Mode = Mode.HYBRID,
    gain_model: GainModel = GainModel.DISCRETE,
    workers: int = 1,
) -> List[Estimate]:
    """P(SINR ≥ τ) for each linear τ; an empty network counts as not covered."""
    _check_trials(n_trials)
    if any(tau <= 0 for tau in tau_grid):
        raise DomainError("SINR thresholds must be positive")
    return coverage_from_outcomes(simulate(master_seed, params, n_trials, mode, gain_model, workers), tau_grid)


def estimate_se(
    master_seed: int,
    params: HybridParams,
    n_trials: int,
    mode: Mode = Mode.HYBRID,
    gain_model: GainModel = GainModel.DISCRETE,
    workers: int = 1,
) -> Estimate:
    """Sample mean of ln(1 + SINR) in nats/s/Hz; an empty network contributes 0."""
    _check_trials(n_trials)
    return se_from_outcomes(simulate(master_seed, params, n_trials, mode, gain_model, workers))
