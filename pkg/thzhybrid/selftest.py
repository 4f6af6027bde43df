"""Acceptance suite run by ``thzhybrid selftest``.

Each check returns a :class:`~thzhybrid.schema.CheckResult`; the Monte Carlo
cross-checks use the configured seed and trial count.
"""
from __future__ import annotations

import logging
from typing import Callable, List, Optional

import numpy as np

from .analysis import (
    association_prob_mmwave,
    association_prob_thz,
    chi_mmwave,
    chi_thz,
    coverage_hybrid,
    coverage_mmwave_interference_limited,
    coverage_mmwave_standalone,
    coverage_thz_standalone,
    derived,
    laplace_interference_mmwave,
    laplace_interference_thz,
    nu,
    se_hybrid,
)
from .channel import absorption_coefficient, johnson_nyquist_noise_density
from .config import db_to_linear, to_params
from .montecarlo import (
    association_from_outcomes,
    coverage_from_outcomes,
    realize_network,
    se_from_outcomes,
    simulate,
    thz_link_budget,
    trial_rng,
    unabsorbed_interference,
)
from .schema import (
    AssociationModel,
    CheckResult,
    Engines,
    HybridParams,
    Metric,
    Mode,
    QuadratureSpec,
    RunConfig,
    SimplifiedAbsorption,
    Tier,
)
from .specfun import integrate, lambert_w0
from .sweep import build_sweep, run_sweep

logger = logging.getLogger(__name__)

TAU_GRID_DB = (-10.0, 0.0, 10.0, 20.0, 30.0, 40.0)
_TIGHT = QuadratureSpec(rel_tol=1e-12, abs_tol=0.0, max_subdivisions=5000)


def _los_ball(params: HybridParams) -> HybridParams:
    return params.model_copy(update={"association_model": AssociationModel.LOS_BALL})


def _worst(diffs: List[float]) -> str:
    return f"worst |Δ| = {max(diffs):.4g}" if diffs else "no points"


# ---------------------------------------------------------------------------
# Analysis against Monte Carlo
# ---------------------------------------------------------------------------


def check_thz_coverage(config: RunConfig) -> CheckResult:
    base = to_params(config)
    taus = [db_to_linear(t) for t in TAU_GRID_DB]
    failures, diffs = [], []
    for n in (8, 16, 32, 64):
        params = base.with_tier(Tier.THZ, array_size=n)
        mc = coverage_from_outcomes(
            simulate(config.master_seed, params, config.n_trials, Mode.THZ_ONLY, config.interferer_gain_model, config.workers),
            taus,
        )
        for tau_db, tau, est in zip(TAU_GRID_DB, taus, mc):
            exact = coverage_thz_standalone(tau, params, config.quadrature)
            diffs.append(abs(exact - est.mean))
            if abs(exact - est.mean) > 0.03 or exact < est.mean - 3 * est.stderr - 1e-12:
                failures.append(f"N={n} τ={tau_db:g} dB: analytic {exact:.4f}, MC {est.mean:.4f}±{est.stderr:.4f}")
    return CheckResult(name="THz-only coverage vs Monte Carlo", passed=not failures, detail="; ".join(failures) or _worst(diffs))


def check_mm_coverage(config: RunConfig) -> CheckResult:
    params = to_params(config)
    taus = [db_to_linear(t) for t in TAU_GRID_DB]
    out = simulate(config.master_seed, params, config.n_trials, Mode.MM_ONLY, config.interferer_gain_model, config.workers)
    failures, diffs = [], []
    for tau_db, tau, est in zip(TAU_GRID_DB, taus, coverage_from_outcomes(out, taus)):
        exact = coverage_mmwave_standalone(tau, params, config.quadrature)
        # 1/n covers the zero-variance case where every trial lands on the same side of τ
        band = 3 * est.stderr + 1.0 / max(est.n_conditioned, 1)
        diffs.append(abs(exact - est.mean))
        if abs(exact - est.mean) > band:
            failures.append(f"τ={tau_db:g} dB: analytic {exact:.4f}, MC {est.mean:.4f}±{est.stderr:.4f}")
    return CheckResult(name="mmWave-only coverage vs Monte Carlo", passed=not failures, detail="; ".join(failures) or _worst(diffs))


def check_association(config: RunConfig) -> CheckResult:
    base = _los_ball(to_params(config))
    failures, notes = [], []
    grid = {}
    for bias in (1.0, 10.0):
        for density in (1e-3, 5e-3, 0.01, 0.05):
            params = base.with_tier(Tier.THZ, density=density, bias=bias)
            exact = association_prob_thz(params, config.quadrature)
            literal = association_prob_thz(params.model_copy(update={"association_model": AssociationModel.UNBOUNDED}), config.quadrature)
            est = association_from_outcomes(
                simulate(config.master_seed, params, config.n_trials, Mode.HYBRID, config.interferer_gain_model, config.workers)
            )
            grid[bias, density] = exact
            if abs(exact - est.mean) > 0.02:
                failures.append(f"λ_T={density:g} B_T={bias:g}: analytic {exact:.4f}, MC {est.mean:.4f}")
            if abs(literal - exact) > 1e-3:
                notes.append(f"unbounded-ball value at λ_T={density:g} B_T={bias:g} is {literal:.4f}")
    densities = (1e-3, 5e-3, 0.01, 0.05)
    for bias in (1.0, 10.0):
        values = [grid[bias, d] for d in densities]
        if any(b < a for a, b in zip(values, values[1:])):
            failures.append(f"𝒜_T not increasing in λ_T at B_T={bias:g}")
    if any(grid[10.0, d] < grid[1.0, d] for d in densities):
        failures.append("𝒜_T not increasing in B_T")
    return CheckResult(
        name="Association probability vs Monte Carlo",
        passed=not failures,
        detail="; ".join(failures + notes),
    )


def check_hybrid(config: RunConfig) -> CheckResult:
    base = _los_ball(to_params(config))
    tau = db_to_linear(20.0)
    failures, diffs = [], []
    for bias in (0.1, 1.0, 10.0):
        for density in (1e-3, 0.01, 0.05):
            params = base.with_tier(Tier.THZ, density=density, bias=bias)
            exact = coverage_hybrid(tau, params, config.quadrature)
            (est,) = coverage_from_outcomes(
                simulate(config.master_seed, params, config.n_trials, Mode.HYBRID, config.interferer_gain_model, config.workers),
                [tau],
            )
            diffs.append(abs(exact - est.mean))
            if abs(exact - est.mean) > 0.03 + 3 * est.stderr:
                failures.append(f"B_T={bias:g} λ_T={density:g}: analytic {exact:.4f}, MC {est.mean:.4f}±{est.stderr:.4f}")

    se_exact = se_hybrid(base, config.quadrature)
    se_mc = se_from_outcomes(
        simulate(config.master_seed, base, config.n_trials, Mode.HYBRID, config.interferer_gain_model, config.workers)
    )
    if abs(se_exact - se_mc.mean) > 3 * se_mc.stderr:
        failures.append(f"SE: analytic {se_exact:.4f}, MC {se_mc.mean:.4f}±{se_mc.stderr:.4f}")
    se_by_n = [se_hybrid(base.with_tier(Tier.THZ, array_size=n), config.quadrature) for n in (32, 64, 128)]
    if any(b <= a for a, b in zip(se_by_n, se_by_n[1:])):
        failures.append("SE not increasing in N_T: " + ", ".join(f"{v:.4f}" for v in se_by_n))
    return CheckResult(name="Hybrid coverage and SE vs Monte Carlo", passed=not failures, detail="; ".join(failures) or _worst(diffs))


# ---------------------------------------------------------------------------
# Deterministic checks
# ---------------------------------------------------------------------------


def check_absorption_peaks(config: RunConfig) -> CheckResult:
    source = SimplifiedAbsorption(environment=to_params(config).environment)
    grid = np.arange(275e9, 400e9 + 1.0, 0.5e9)
    k_a = np.asarray(absorption_coefficient(grid, source))
    if not np.all(np.isfinite(k_a)) or np.any(k_a <= 0):
        return CheckResult(name="Absorption peaks", passed=False, detail="non-finite or non-positive values")
    interior = np.flatnonzero((k_a[1:-1] > k_a[:-2]) & (k_a[1:-1] > k_a[2:])) + 1
    peaks = grid[interior] / 1e9
    ok = len(peaks) == 2 and abs(peaks[0] - 324.8) <= 3 and abs(peaks[1] - 379.7) <= 3
    return CheckResult(name="Absorption peaks", passed=ok, detail="peaks at " + ", ".join(f"{p:g} GHz" for p in peaks))


def _chi_thz_numeric(s: float, x: float, params: HybridParams) -> float:
    d = derived(params)
    g_hat, m, alpha = d.thz_pattern.normalized_gains, params.nakagami_m, params.thz.pathloss_exponent
    return integrate(
        lambda t: t * float(np.sum((1.0 + s * g_hat * t ** (-alpha) / m) ** (-m))),
        x, params.thz.los_radius, _TIGHT, name="χ_T reference",
    )


def _chi_mm_numeric(s: float, x: float, params: HybridParams) -> float:
    d = derived(params)
    g_hat, alpha = d.mm_pattern.normalized_gains, params.mmwave.pathloss_exponent
    return integrate(
        lambda t: t * float(np.sum(1.0 / (1.0 + s * g_hat * t ** (-alpha)))),
        x, params.mmwave.los_radius, _TIGHT, name="χ_m reference",
    )


def check_closed_forms(config: RunConfig) -> CheckResult:
    rng = np.random.default_rng(config.master_seed)
    base = to_params(config)
    worst_thz = worst_mm = 0.0
    for _ in range(100):
        n = int(rng.choice([8, 16, 32, 64]))
        m = int(rng.integers(1, 6))
        alpha = float(rng.uniform(2.2, 5.0))
        params = base.with_tier(Tier.THZ, array_size=n, pathloss_exponent=alpha).with_tier(
            Tier.MMWAVE, array_size=n, pathloss_exponent=alpha
        )
        params = params.model_copy(update={"nakagami_m": m})
        # main-lobe y(R) = s·R^{-α}/M stays within [1e-3, 10]
        R_t = params.thz.los_radius
        s_t = 10.0 ** rng.uniform(-3, 1) * m * R_t**alpha
        x_t = float(rng.uniform(0.0, 0.9)) * R_t
        ref = _chi_thz_numeric(s_t, x_t, params)
        worst_thz = max(worst_thz, abs(chi_thz(s_t, x_t, params) - ref) / abs(ref))
        R_m = params.mmwave.los_radius
        s_m = 10.0 ** rng.uniform(-3, 6)
        x_m = float(rng.uniform(0.0, 0.9)) * R_m
        ref = _chi_mm_numeric(s_m, x_m, params)
        worst_mm = max(worst_mm, abs(chi_mmwave(s_m, x_m, params) - ref) / abs(ref))

    xs = 10.0 ** rng.uniform(-10, 10, size=200)
    w = np.asarray(lambert_w0(xs))
    lambert = float(np.max(np.abs(w * np.exp(w) - xs) / xs))

    d = derived(base)
    x_hat = rng.uniform(0.1, base.mmwave.los_radius, size=200)
    r = np.asarray(nu(x_hat, base))
    lhs = d.epsilon * r**base.thz.pathloss_exponent * np.exp(d.k_a * r)
    nu_residual = float(np.max(np.abs(lhs - x_hat**base.mmwave.pathloss_exponent) / x_hat**base.mmwave.pathloss_exponent))

    ok = worst_thz <= 1e-8 and worst_mm <= 1e-8 and lambert <= 1e-12 and nu_residual <= 1e-9
    return CheckResult(
        name="Closed forms vs quadrature",
        passed=ok,
        detail=f"χ_T {worst_thz:.2e}, χ_m {worst_mm:.2e}, Lambert W {lambert:.2e}, ν {nu_residual:.2e}",
    )


def check_product_form(config: RunConfig) -> CheckResult:
    """Noise-free α_m = 2 product form against the general pathway; a mismatch is reported, not failed."""
    params = to_params(config).with_tier(Tier.MMWAVE, pathloss_exponent=2.0)
    params = params.model_copy(update={"mmwave_noise_power": 0.0})
    rows = []
    agree = True
    for tau_db in TAU_GRID_DB:
        tau = db_to_linear(tau_db)
        general = coverage_mmwave_standalone(tau, params, config.quadrature)
        product = coverage_mmwave_interference_limited(tau, params, config.quadrature)
        if abs(general - product) > 1e-6:
            agree = False
            rows.append(f"τ={tau_db:g} dB: general {general:.8f}, product {product:.8f}")
    detail = "agree to 1e-6" if agree else "discrepancy: " + "; ".join(rows)
    return CheckResult(name="Interference-limited product form", passed=True, detail=detail)


def check_structure(config: RunConfig) -> CheckResult:
    params = to_params(config)
    failures = []
    total = association_prob_thz(params, config.quadrature) + association_prob_mmwave(params, config.quadrature)
    if abs(total - 1.0) > 1e-12:
        failures.append(f"𝒜_T + 𝒜_m = {total!r}")
    for x in (0.0, 5.0, 50.0):
        if laplace_interference_thz(0.0, x, params) != 1.0 or laplace_interference_mmwave(0.0, x, params) != 1.0:
            failures.append(f"𝓛(0) ≠ 1 at x={x:g}")
    low_thz = coverage_thz_standalone(1e-12, params, config.quadrature)
    low_mm = coverage_mmwave_standalone(1e-12, params, config.quadrature)
    if low_thz < 1 - 1e-4 or low_mm < 1 - 1e-4:
        failures.append(f"coverage at τ→0: THz {low_thz:.6f}, mmWave {low_mm:.6f}")

    noise = johnson_nyquist_noise_density(params.thz.frequency, params.environment.temperature)
    worst = 0.0
    for i in range(1000):
        r = realize_network(trial_rng(config.master_seed, i), params, Mode.HYBRID, config.interferer_gain_model)
        if r.association is not Tier.THZ or r.thz_nodes.size < 2 or r.sinr == 0:
            continue
        raw = unabsorbed_interference(params, r.thz_nodes)
        if raw > 0:
            worst = max(worst, abs(r.interference + r.absorption_noise - raw) / raw)
        signal, interference, absorption_noise = thz_link_budget(params, r.thz_nodes)
        recomputed = signal / (noise + interference + absorption_noise)
        worst = max(worst, abs(recomputed - r.sinr) / r.sinr)
    if worst > 1e-10:
        failures.append(f"conservation identity off by {worst:.2e}")
    return CheckResult(name="Structural invariants", passed=not failures, detail="; ".join(failures))


def check_reproducibility(config: RunConfig) -> CheckResult:
    sweep = build_sweep("array_size_thz=16,32", Metric.COVERAGE_THZ, "0,20", Engines.MC)
    small = config.model_copy(update={"n_trials": min(config.n_trials, 500)})
    runs = [
        run_sweep(small.model_copy(update={"workers": w}), sweep) for w in (1, 1, 2)
    ]
    same = all(rows == runs[0] for rows in runs[1:])
    return CheckResult(name="Reproducibility across runs and workers", passed=same)


CHECKS: List[Callable[[RunConfig], CheckResult]] = [
    check_absorption_peaks,
    check_closed_forms,
    check_product_form,
    check_structure,
    check_reproducibility,
    check_association,
    check_thz_coverage,
    check_mm_coverage,
    check_hybrid,
]


def run_selftest(config: RunConfig, advance: Optional[Callable[[CheckResult], None]] = None) -> List[CheckResult]:
    results = []
    for check in CHECKS:
        logger.info("selftest: %s", check.__name__)
        result = check(config)
        results.append(result)
        if advance is not None:
            advance(result)
    return results
