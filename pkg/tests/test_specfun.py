"""Unit tests for the hypergeometric, Lambert W and quadrature kernel."""
import math

import numpy as np
import pytest
from scipy import special

from thzhybrid.errors import ConvergenceError, DomainError
from thzhybrid.schema import QuadratureSpec
from thzhybrid.specfun import gauss_2f1, integrate, integrate_semi_infinite, lambert_w0


def test_2f1_at_origin_is_one():
    assert gauss_2f1(-0.5, 4, 0.5, 0.0) == pytest.approx(1.0)


def test_2f1_logarithm_identity():
    z = np.array([1e-6, 0.3, 5.0, 1e3, 1e8])
    assert gauss_2f1(1.0, 1.0, 2.0, -z) == pytest.approx(np.log1p(z) / z, rel=1e-12, abs=0)


@pytest.mark.parametrize("u", [1e12, 1e15, 1e20])
def test_2f1_logarithm_identity_far_out(u):
    assert gauss_2f1(1.0, 1.0, 2.0, -u) == pytest.approx(math.log1p(u) / u, rel=1e-12, abs=0)


def test_2f1_quadratic_pathloss_family():
    # ₂F₁(1, 2; 3; −u) = 2/u·(1 − ln(1+u)/u)
    u = np.array([0.5, 2.0, 1e4, 1e13])
    expected = 2.0 / u * (1.0 - np.log1p(u) / u)
    assert gauss_2f1(1.0, 2.0, 3.0, -u) == pytest.approx(expected, rel=1e-11, abs=0)


def test_2f1_matches_mpmath():
    mpmath = pytest.importorskip("mpmath")
    cases = [
        (-0.5, 4, 0.5, -3.7),
        (1.0, 1.5, 2.5, -120.0),
        (-2 / 3, 2, 1 / 3, -0.01),
        (1.0, 2 / 3, 5 / 3, -1e8),
        (1.0, 1.5, 2.5, -3e13),
        (-0.5, 4, 0.5, -1e10),
        (1.0, 2.0, 6.0, -1e6),
        (1.0, 2.0, 6.0, -40.0),
        (1.0, 1.8, 5.8, -2e3),
    ]
    for a, b, c, z in cases:
        expected = float(mpmath.hyp2f1(a, b, c, z))
        assert gauss_2f1(a, b, c, z) == pytest.approx(expected, rel=1e-10, abs=0)


@pytest.mark.parametrize("a, b, c", [(1.0, 1.0, 2.0), (1.0, 2.0, 6.0), (1.0, 0.8, 1.8), (-0.5, 4.0, 0.5)])
def test_2f1_continuous_across_minus_one(a, b, c):
    inside = gauss_2f1(a, b, c, -1.0)
    outside = gauss_2f1(a, b, c, -1.0 - 1e-9)
    assert outside == pytest.approx(inside, rel=1e-8)


def test_2f1_returns_scalar_for_scalar_input():
    assert isinstance(gauss_2f1(1.0, 1.0, 2.0, -1.0), float)
    assert gauss_2f1(1.0, 1.0, 2.0, np.array([-1.0, -2.0])).shape == (2,)
    assert isinstance(gauss_2f1(1.0, 1.0, 2.0, -1e9), float)


def test_2f1_rejects_bad_arguments():
    with pytest.raises(DomainError):
        gauss_2f1(1.0, 1.0, 2.0, 0.5)
    with pytest.raises(DomainError):
        gauss_2f1(1.0, 1.0, -2.0, -0.5)


def test_lambert_w_residual():
    x = np.logspace(-10, 10, 200)
    w = lambert_w0(x)
    assert np.all(np.abs(w * np.exp(w) - x) <= 1e-12 * x)


def test_lambert_w_known_values():
    assert lambert_w0(0.0) == 0.0
    assert lambert_w0(math.e) == pytest.approx(1.0, rel=1e-14)


def test_lambert_w_rejects_negative():
    with pytest.raises(DomainError):
        lambert_w0(-0.1)


def test_integrate_basic():
    assert integrate(math.sin, 0.0, math.pi) == pytest.approx(2.0, rel=1e-10)
    assert integrate(math.sin, 1.0, 1.0) == 0.0
    with pytest.raises(DomainError):
        integrate(math.sin, 1.0, 0.0)


def test_integrate_names_failing_integral():
    spec = QuadratureSpec(max_subdivisions=1)
    with pytest.raises(ConvergenceError) as info:
        integrate(lambda x: math.sin(100 * x) * math.exp(-x), 0.0, 10.0, spec, name="wiggly test integral")
    assert info.value.integral == "wiggly test integral"
    assert "wiggly test integral" in str(info.value)


def test_semi_infinite_exponential():
    assert integrate_semi_infinite(lambda x: math.exp(-x), 0.0) == pytest.approx(1.0, rel=1e-10)


def test_semi_infinite_slow_tail():
    assert integrate_semi_infinite(lambda x: 1.0 / (1.0 + x) ** 2, 0.0) == pytest.approx(1.0, rel=1e-9)


def test_semi_infinite_without_decay():
    with pytest.raises(ConvergenceError):
        integrate_semi_infinite(lambda x: 1.0, 0.0, QuadratureSpec(max_doublings=5), name="constant")


def test_lambert_w_increasing():
    w = lambert_w0(np.logspace(-12, 12, 400))
    assert np.all(np.diff(w) > 0)


def test_integrate_additive():
    def f(x):
        return math.exp(-x) * math.cos(3 * x)

    whole = integrate(f, 0.0, 3.0)
    assert integrate(f, 0.0, 1.2) + integrate(f, 1.2, 3.0) == pytest.approx(whole, rel=1e-10)


def test_semi_infinite_gaussian_moment():
    assert integrate_semi_infinite(lambda x: x * math.exp(-x * x), 0.0) == pytest.approx(0.5, rel=1e-9)


def test_semi_infinite_exponential_integral():
    expected = math.e * special.exp1(1.0)
    assert integrate_semi_infinite(lambda x: math.exp(-x) / (1.0 + x), 0.0) == pytest.approx(expected, rel=1e-9)
