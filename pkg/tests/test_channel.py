"""Unit tests for absorption, pathloss, noise and fading samplers."""
import math

import numpy as np
import pytest
from scipy import stats

from thzhybrid.channel import (
    absorption_coefficient,
    absorption_loss,
    johnson_nyquist_noise_density,
    pathloss,
    sample_nakagami_power,
    sample_rayleigh_power,
    saturated_vapor_pressure,
    water_vapor_mixing_ratio,
)
from thzhybrid.errors import DomainError
from thzhybrid.schema import CONSTANTS, Environment, FixedAbsorption, SimplifiedAbsorption


def test_buck_against_magnus():
    t_c = 296.0 - 273.15
    magnus = 610.94 * math.exp(17.625 * t_c / (t_c + 243.04))
    value = saturated_vapor_pressure(Environment())
    assert value == pytest.approx(magnus, rel=0.02)
    assert value == pytest.approx(2.79e3, rel=0.01)


def test_buck_pressure_enhancement():
    hi = saturated_vapor_pressure(Environment(pressure=101325.0))
    lo = saturated_vapor_pressure(Environment(pressure=50000.0))
    assert hi / lo == pytest.approx((1.0007 + 3.46e-6 * 1013.25) / (1.0007 + 3.46e-6 * 500.0))


def test_buck_monotone_in_temperature():
    values = [saturated_vapor_pressure(Environment(temperature=t)) for t in np.arange(270.0, 321.0, 5.0)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_mixing_ratio():
    assert water_vapor_mixing_ratio(Environment(relative_humidity=0.0)) == 0.0
    assert water_vapor_mixing_ratio(Environment()) == pytest.approx(0.0165, rel=0.01)
    ratio = water_vapor_mixing_ratio(Environment(relative_humidity=0.8)) / water_vapor_mixing_ratio(
        Environment(relative_humidity=0.4)
    )
    assert ratio == pytest.approx(2.0)


def test_humidity_must_be_fraction():
    with pytest.raises(ValueError, match=r"expected fraction in \[0,1\]"):
        Environment(relative_humidity=60)


def _hand_chained_k_a(f):
    t_c = 296.0 - 273.15
    p_w = 100.0 * 6.1121 * (1.0007 + 3.46e-6 * 1013.25) * math.exp(17.502 * t_c / (240.94 + t_c))
    mu = 0.6 * p_w / 101325.0
    nu = f / (100.0 * 299_792_458.0)
    y1 = 0.2205 * mu * (0.1303 * mu + 0.0294) / ((0.4093 * mu + 0.0925) ** 2 + (nu - 10.835) ** 2)
    y2 = 2.014 * mu * (0.1702 * mu + 0.0303) / ((0.537 * mu + 0.0956) ** 2 + (nu - 12.664) ** 2)
    omega = 5.54e-37 * f**3 - 3.94e-25 * f**2 + 9.06e-14 * f - 6.36e-3
    return y1 + y2 + omega


def test_absorption_at_350_ghz():
    value = absorption_coefficient(350e9, SimplifiedAbsorption())
    assert value == pytest.approx(_hand_chained_k_a(350e9), rel=1e-12)


def test_absorption_peaks():
    grid = np.arange(275e9, 400e9 + 1.0, 0.5e9)
    k_a = absorption_coefficient(grid, SimplifiedAbsorption())
    assert np.all(np.isfinite(k_a)) and np.all(k_a > 0)
    interior = np.flatnonzero((k_a[1:-1] > k_a[:-2]) & (k_a[1:-1] > k_a[2:])) + 1
    peaks = grid[interior] / 1e9
    assert len(peaks) == 2
    assert peaks[0] == pytest.approx(324.8, abs=3)
    assert peaks[1] == pytest.approx(379.7, abs=3)


def test_absorption_band_and_override():
    with pytest.raises(DomainError, match="validity band"):
        absorption_coefficient(500e9, SimplifiedAbsorption())
    assert absorption_coefficient(500e9, FixedAbsorption(k_a=0.05)) == 0.05


def test_absorption_loss():
    assert absorption_loss(0.3, 0.0) == 1.0
    assert absorption_loss(0.0, 123.0) == 1.0
    assert absorption_loss(0.01, 100.0) == pytest.approx(math.exp(-1.0))


def test_pathloss_laws():
    f = 350e9
    assert pathloss(f, 1.0, 2.0) == pytest.approx(pathloss(f, 1.0, 4.0))
    assert pathloss(f, 20.0, 3.0) / pathloss(f, 10.0, 3.0) == pytest.approx(2.0**-3)
    assert pathloss(2 * f, 10.0, 2.0) / pathloss(f, 10.0, 2.0) == pytest.approx(0.25)
    with pytest.raises(DomainError):
        pathloss(f, 0.0, 2.0)


def test_received_power_decreases_with_distance():
    x = np.linspace(1.0, 100.0, 200)
    total = pathloss(350e9, x, 2.0) * absorption_loss(0.05, x)
    assert np.all(np.diff(total) < 0)


def test_johnson_nyquist():
    kt = CONSTANTS.k_boltzmann * 296.0
    assert johnson_nyquist_noise_density(1e3, 296.0) == pytest.approx(kt, rel=1e-6)
    values = [johnson_nyquist_noise_density(f, 296.0) for f in np.linspace(0.1e12, 10e12, 50)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_johnson_nyquist_extended_precision():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40
    hf = mpmath.mpf(CONSTANTS.hbar_planck) * mpmath.mpf(350e9)
    expected = hf / mpmath.expm1(hf / (mpmath.mpf(CONSTANTS.k_boltzmann) * 296))
    assert johnson_nyquist_noise_density(350e9, 296.0) == pytest.approx(float(expected), rel=1e-13)


def test_nakagami_moments(rng):
    g = sample_nakagami_power(rng, 4, size=1_000_000)
    assert g.mean() == pytest.approx(1.0, abs=4 / math.sqrt(4 * 1e6))
    assert g.var() == pytest.approx(0.25, rel=0.05)


def test_nakagami_m1_is_exponential(rng):
    g = sample_nakagami_power(rng, 1, size=100_000)
    p = 1 - math.exp(-1.0)
    assert np.mean(g <= 1.0) == pytest.approx(p, abs=4 * math.sqrt(p * (1 - p) / 1e5))


def test_rayleigh_power(rng):
    h = sample_rayleigh_power(rng, size=1_000_000)
    assert h.mean() == pytest.approx(1.0, abs=4e-3)
    assert np.mean(h > math.log(2)) == pytest.approx(0.5, abs=4 * 0.5 / math.sqrt(1e6))


def test_rayleigh_matches_nakagami_m1(rng):
    a = sample_rayleigh_power(rng, size=100_000)
    b = sample_nakagami_power(rng, 1, size=100_000)
    assert stats.ks_2samp(a, b).pvalue > 0.001
