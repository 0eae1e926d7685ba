import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twophoton.quadrature import (
    ConvergenceError,
    QuadratureSettings,
    adaptive_integrate,
    exp_weighted_tail_integral,
    integrate_on_grid,
    scaled_erfc,
)

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


def test_constant_on_unit_interval():
    assert integrate_on_grid(np.ones(101), 0.01) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("n", [3, 4, 5, 100, 101])
def test_simpson_exact_for_quadratics(n):
    x = np.linspace(0.0, 1.0, n)
    assert integrate_on_grid(x**2, x[1] - x[0]) == pytest.approx(1.0 / 3.0, abs=1e-15)


def test_gaussian_normalization_on_grid():
    T = 10.0
    x = np.linspace(-60, 60, 4801)
    vals = np.exp(-2 * x**2 / T**2)
    closed = T * math.sqrt(math.pi / 2)
    assert integrate_on_grid(vals, x[1] - x[0]) / closed == pytest.approx(1.0, abs=1e-10)


def test_integrate_on_grid_rejects_short_input():
    with pytest.raises(ValueError):
        integrate_on_grid([1.0, 2.0], 0.1)
    with pytest.raises(ValueError):
        integrate_on_grid([1.0, 2.0, 3.0], 0.0)


def test_integrate_on_grid_axis():
    vals = np.outer(np.ones(3), np.linspace(0, 1, 11))
    np.testing.assert_allclose(integrate_on_grid(vals, 0.1, axis=1), [0.5, 0.5, 0.5])


@settings(max_examples=50, deadline=None)
@given(finite, finite, st.integers(min_value=1, max_value=40))
def test_integrate_on_grid_is_linear(a, b, half):
    rng = np.random.default_rng(half)
    n = 2 * half + 1
    f = rng.normal(size=n)
    g = rng.normal(size=n)
    lhs = integrate_on_grid(a * f + b * g, 0.3)
    rhs = a * integrate_on_grid(f, 0.3) + b * integrate_on_grid(g, 0.3)
    assert lhs == pytest.approx(rhs, abs=1e-12 * (1 + abs(a) + abs(b)) * n)


# erfcx references from mpmath at 40 digits
@pytest.mark.parametrize(
    "z, expected",
    [
        (0.0, 1.0),
        (0.5, 0.61569034419292587487),
        (5.0, 0.11070463773306862637),
        (20.0, 0.028174348741051319319),
        (50.0, 0.0112815362653237725),
        (-5.0, 144009798674.66104041),
    ],
)
def test_scaled_erfc_reference_values(z, expected):
    assert scaled_erfc(z) == pytest.approx(expected, rel=1e-12)


def test_scaled_erfc_against_mpmath_grid():
    mpmath.mp.dps = 30
    zs = np.linspace(-5, 50, 111)
    ref = np.array([float(mpmath.exp(z * z) * mpmath.erfc(z)) for z in zs])
    np.testing.assert_allclose(scaled_erfc(zs), ref, rtol=1e-12)


def test_scaled_erfc_large_argument_asymptote():
    z = 1e6
    assert scaled_erfc(z) == pytest.approx(1 / (z * math.sqrt(math.pi)), rel=1e-12)


def test_gauss_kronrod_polynomial_exactness():
    for k in range(23):
        val = adaptive_integrate(lambda s, k=k: s**k, -1.0, 1.0, initial_panels=1)
        expected = 2.0 / (k + 1) if k % 2 == 0 else 0.0
        assert val == pytest.approx(expected, abs=1e-14)


def test_adaptive_vector_valued():
    out = adaptive_integrate(lambda s: np.stack([np.sin(s), np.cos(s)], axis=1), 0.0, math.pi)
    np.testing.assert_allclose(out, [2.0, 0.0], atol=1e-12)


def test_adaptive_reversed_limits():
    assert adaptive_integrate(np.exp, 1.0, 0.0) == pytest.approx(1 - math.e, rel=1e-12)


def test_adaptive_is_deterministic():
    f = lambda s: np.exp(-(s**2)) * np.cos(3 * s)
    assert adaptive_integrate(f, -4, 7) == adaptive_integrate(f, -4, 7)


def test_convergence_error_carries_estimate():
    tight = QuadratureSettings(relative_tolerance=1e-15, absolute_tolerance=1e-300, max_subdivisions=2)
    with pytest.raises(ConvergenceError) as info:
        adaptive_integrate(lambda s: np.sqrt(np.abs(s - 0.3)), 0.0, 1.0, tight)
    assert info.value.estimate == pytest.approx(0.3**1.5 * 2 / 3 + 0.7**1.5 * 2 / 3, rel=1e-3)
    assert np.all(np.asarray(info.value.error_bound) > 0)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"relative_tolerance": 0.0},
        {"absolute_tolerance": -1.0},
        {"tail_cutoff_exponent": 10.0},
        {"max_subdivisions": 0},
    ],
)
def test_settings_validation(kwargs):
    with pytest.raises(ValueError):
        QuadratureSettings(**kwargs)


def test_tail_of_zero_is_zero():
    assert exp_weighted_tail_integral(lambda s: 0.0 * s, 0.0, 1.0) == 0.0


def test_tail_of_constant():
    assert exp_weighted_tail_integral(lambda s: 1.0, 0.0, 1.0) == pytest.approx(1.0, abs=1e-12)


def test_tail_rate_scaling():
    assert exp_weighted_tail_integral(lambda s: 1.0, 3.0, 4.0) == pytest.approx(0.25, abs=1e-12)


def test_tail_rejects_nonpositive_rate():
    with pytest.raises(ValueError):
        exp_weighted_tail_integral(lambda s: 1.0, 0.0, 0.0)


def test_tail_gaussian_closed_form():
    # mpmath: 0.5 * sqrt(100 pi) * exp(25) * erfc(5)
    val = exp_weighted_tail_integral(lambda s: np.exp(-(s**2) / 100), 0.0, 1.0)
    assert val == pytest.approx(0.98109430731538791444, abs=1e-12)


def gaussian_tail_closed(x, T):
    # int_x^inf e^{-(s-x)} e^{-s^2/T^2} ds = (T sqrt(pi)/2) e^{x + T^2/4} erfc(x/T + T/2)
    return float(T * mpmath.sqrt(mpmath.pi) / 2 * mpmath.exp(x + T * T / 4) * mpmath.erfc(x / T + T / 2))


@pytest.mark.parametrize("T", [1.0, 10.0])
def test_tail_matches_erfc_identity(T):
    mpmath.mp.dps = 30
    for x in np.linspace(-5 * T, 3 * T, 17):
        val = exp_weighted_tail_integral(lambda s: np.exp(-(s / T) ** 2), x, 1.0, points=[0.0])
        assert val == pytest.approx(gaussian_tail_closed(x, T), abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=-20, max_value=20), st.floats(min_value=-5, max_value=5))
def test_tail_shift_identity(shift, lower):
    f = lambda s: np.exp(-(s**2) / 4) * (1 + 0.3 * np.sin(s))
    g = lambda s: f(s - shift)
    a = exp_weighted_tail_integral(f, lower, 1.0, points=[0.0])
    b = exp_weighted_tail_integral(g, lower + shift, 1.0, points=[shift])
    assert a == pytest.approx(b, abs=1e-10)
