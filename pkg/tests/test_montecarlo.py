"""Monte Carlo oracle: snapshots, reproducibility and estimators."""
import math

import numpy as np
import pytest
from scipy import stats

from thzhybrid.analysis import (
    association_prob_thz,
    coverage_mmwave_standalone,
    coverage_thz_standalone,
    nearest_distance_pdf,
)
from thzhybrid.channel import johnson_nyquist_noise_density
from thzhybrid.errors import DomainError
from thzhybrid.montecarlo import (
    TrialOutcomes,
    association_from_outcomes,
    coverage_from_outcomes,
    estimate_association,
    estimate_coverage,
    estimate_se,
    realize_network,
    se_from_outcomes,
    simulate,
    thz_link_budget,
    trial_rng,
    unabsorbed_interference,
)
from thzhybrid.schema import AssociationModel, FixedAbsorption, HybridParams, Mode, Tier, TierParams
from thzhybrid.specfun import integrate

SEED = 1729


@pytest.fixture(scope="module")
def sparse(params):
    return params.with_tier(Tier.THZ, density=1e-3)


def _symmetric() -> HybridParams:
    tier = TierParams(
        density=1e-3, frequency=30e9, tx_power=10.0, bias=1.0, pathloss_exponent=2.0, los_radius=50.0, array_size=16
    )
    return HybridParams(thz=tier, mmwave=tier, mmwave_noise_power=1e-12, absorption=FixedAbsorption(k_a=0.0))


def test_trial_streams_are_reproducible():
    a = trial_rng(SEED, 7).random(5)
    assert np.array_equal(a, trial_rng(SEED, 7).random(5))
    assert not np.array_equal(a, trial_rng(SEED, 8).random(5))
    assert not np.array_equal(a, trial_rng(SEED + 1, 7).random(5))


def test_empty_network(params):
    barren = params.with_tier(Tier.THZ, density=1e-12).with_tier(Tier.MMWAVE, density=1e-12)
    r = realize_network(trial_rng(SEED, 0), barren)
    assert r.association is None
    assert r.serving_distance is None
    assert r.sinr == 0.0

    [est] = estimate_coverage(SEED, barren, [1.0], n_trials=100)
    assert est.n_conditioned == 0
    assert math.isnan(est.mean)
    assert est.unconditional_mean == 0.0


def test_node_placement(sparse, rng):
    counts = []
    for _ in range(400):
        r = realize_network(rng, sparse, Mode.THZ_ONLY)
        nodes = r.thz_nodes
        counts.append(nodes.distances.size)
        assert r.mm_nodes.distances.size == 0
        if nodes.nearest is None:
            continue
        assert np.all((nodes.distances > 0) & (nodes.distances <= sparse.thz.los_radius))
        assert nodes.nearest == int(np.argmin(nodes.distances))
        assert nodes.gains[nodes.nearest] == sparse.thz.array_size
        assert r.serving_distance == nodes.distances[nodes.nearest]
    expected = sparse.thz.density * math.pi * sparse.thz.los_radius**2
    assert np.mean(counts) == pytest.approx(expected, abs=4 * math.sqrt(expected / len(counts)))


def test_thz_snapshot_bookkeeping(sparse, rng):
    noise = johnson_nyquist_noise_density(sparse.thz.frequency, sparse.environment.temperature)
    checked = 0
    for _ in range(50):
        r = realize_network(rng, sparse, Mode.THZ_ONLY)
        if r.association is not Tier.THZ:
            continue
        signal, interference, absorption_noise = thz_link_budget(sparse, r.thz_nodes)
        assert interference + absorption_noise == pytest.approx(
            unabsorbed_interference(sparse, r.thz_nodes), rel=1e-12, abs=1e-300
        )
        assert r.interference == interference
        assert r.absorption_noise == absorption_noise
        assert r.sinr == pytest.approx(signal / (noise + interference + absorption_noise), rel=1e-12)
        checked += 1
    assert checked > 40


def test_bias_dominance(params):
    dominant = params.with_tier(Tier.THZ, bias=1e12)
    assert estimate_association(SEED, dominant, 200).mean >= 0.999


def test_symmetric_tiers_split_evenly():
    est = estimate_association(SEED, _symmetric(), 2000)
    assert est.mean == pytest.approx(0.5, abs=4 * est.stderr)


def test_empty_mmwave_ball_fraction(params):
    outcomes = simulate(SEED, params, 2000, Mode.MM_ONLY)
    expected = math.exp(-params.mmwave.density * math.pi * params.mmwave.los_radius**2)
    empty = float(np.mean(outcomes.codes == 0))
    assert empty == pytest.approx(expected, abs=4 * math.sqrt(expected * (1 - expected) / 2000))


def test_coverage_monotone_in_threshold(sparse):
    taus = [0.1, 1.0, 10.0, 100.0, 1000.0]
    estimates = estimate_coverage(SEED, sparse, taus, n_trials=300)
    means = [e.unconditional_mean for e in estimates]
    assert all(b <= a for a, b in zip(means, means[1:]))
    assert all(e.n_trials == 300 for e in estimates)


def test_thz_only_coverage_at_tiny_threshold(params):
    [est] = estimate_coverage(SEED, params, [1e-9], n_trials=100, mode=Mode.THZ_ONLY)
    assert est.n_conditioned == 100
    assert est.mean >= 0.99


def test_noise_limited_spectral_efficiency(params):
    loud = params.model_copy(update={"mmwave_noise_power": 1e3})
    est = estimate_se(SEED, loud, 200, mode=Mode.MM_ONLY)
    assert est.unconditional_mean < 0.05
    assert Tier.THZ not in est.by_tier


def test_worker_count_does_not_change_outcomes(sparse):
    serial = simulate(SEED, sparse, 240, workers=1)
    parallel = simulate(SEED, sparse, 240, workers=3)
    assert np.array_equal(serial.codes, parallel.codes)
    assert np.array_equal(serial.sinr, parallel.sinr)


def test_minimum_trials(params):
    with pytest.raises(DomainError):
        estimate_coverage(SEED, params, [1.0], n_trials=99)
    with pytest.raises(DomainError):
        estimate_se(SEED, params, 50)
    with pytest.raises(DomainError):
        estimate_coverage(SEED, params, [0.0], n_trials=100)
    with pytest.raises(DomainError):
        simulate(SEED, params, 0)


def test_estimators_on_known_outcomes():
    outcomes = TrialOutcomes(codes=np.array([0, 1, 2, 1], dtype=np.int8), sinr=np.array([0.0, 3.0, 0.5, 1.0]))

    assoc = association_from_outcomes(outcomes)
    assert assoc.mean == pytest.approx(2 / 3)
    assert assoc.unconditional_mean == pytest.approx(0.5)
    assert assoc.n_conditioned == 3
    assert assoc.by_tier == {}

    [cov] = coverage_from_outcomes(outcomes, [1.0])
    assert cov.mean == pytest.approx(2 / 3)
    assert cov.stderr == pytest.approx(np.std([1.0, 0.0, 1.0], ddof=1) / math.sqrt(3))
    assert cov.by_tier[Tier.THZ].mean == 1.0
    assert cov.by_tier[Tier.MMWAVE].mean == 0.0

    se = se_from_outcomes(outcomes)
    assert se.mean == pytest.approx(np.mean(np.log1p([3.0, 0.5, 1.0])))
    assert se.unconditional_mean == pytest.approx(np.sum(np.log1p([3.0, 0.5, 1.0])) / 4)


# ---------------------------------------------------------------------------
# Against the analysis
# ---------------------------------------------------------------------------


def test_nearest_distance_histogram(params):
    tier = params.with_tier(Tier.THZ, density=2e-3, los_radius=30.0)
    density, radius = tier.thz.density, tier.thz.los_radius
    distances = []
    for i in range(5000):
        r = realize_network(trial_rng(SEED, i), tier, Mode.THZ_ONLY)
        if r.association is Tier.THZ:
            distances.append(r.serving_distance)

    mass = -math.expm1(-math.pi * density * radius**2)
    edges = np.sqrt(-np.log1p(-np.linspace(0.0, 1.0, 11) * mass) / (math.pi * density))
    edges[-1] = radius
    observed, _ = np.histogram(distances, bins=edges)
    pdf = nearest_distance_pdf(density, radius)
    expected = np.array([integrate(pdf, lo, hi) for lo, hi in zip(edges[:-1], edges[1:])])
    expected *= observed.sum() / expected.sum()
    assert stats.chisquare(observed, expected).pvalue > 1e-3


def test_mm_coverage_matches_analysis(params):
    taus = [1.0, 1e5, 1e6]
    estimates = estimate_coverage(SEED, params, taus, n_trials=4000, mode=Mode.MM_ONLY)
    for tau, est in zip(taus, estimates):
        exact = coverage_mmwave_standalone(tau, params)
        assert abs(exact - est.mean) <= 4 * est.stderr + 1.0 / est.n_conditioned


def test_thz_coverage_bounds_simulation_from_above(sparse):
    taus = [10.0, 100.0]
    estimates = estimate_coverage(SEED, sparse, taus, n_trials=2000, mode=Mode.THZ_ONLY)
    for tau, est in zip(taus, estimates):
        exact = coverage_thz_standalone(tau, sparse)
        assert exact >= est.mean - 4 * est.stderr
        assert abs(exact - est.mean) <= 0.05


def test_los_ball_association_matches_analysis(sparse):
    capped = sparse.model_copy(update={"association_model": AssociationModel.LOS_BALL})
    est = estimate_association(SEED, capped, 3000)
    assert est.mean == pytest.approx(association_prob_thz(capped), abs=4 * est.stderr + 0.01)
