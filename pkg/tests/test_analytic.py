import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from qkbandwidth.analytic import (
    SMALL_C_ALPHA,
    AnalyticParams,
    argmax_variance_c,
    eta_max_analytic,
    eta_max_limits,
    expressivity_expectation,
    expressivity_limits,
    mean_uniform,
    monte_carlo_check,
    operator_eigenvalues,
    peak_lc,
    sinc,
    var_limit_large_c,
    var_limit_small_c,
    var_uniform,
    variance_derivative,
    variance_peak_c,
)
from qkbandwidth.errors import ValidationError
from qkbandwidth.harness.config import default_c_grid
from qkbandwidth.metrics import h_constant

GRID = default_c_grid()


def cosine_form_moments(a):
    """One-qubit moments written directly in terms of cos(2 pi a) and cos(4 pi a)."""
    p2 = math.pi**2
    e1 = 0.5 - math.cos(2 * math.pi * a) / (4 * p2 * a * a) + 1 / (4 * p2 * a * a)
    # E[cos^4(a d / 2)] over d = x - x', x, x' uniform on [-pi, pi]
    e2 = 3 / 8 + (1 - math.cos(2 * math.pi * a)) / (4 * p2 * a * a) + (1 - math.cos(4 * math.pi * a)) / (64 * p2 * a * a)
    return e1, e2


def quadrature_moments(a):
    """Moments by numerical integration over the triangular density of x - x'."""
    dens = lambda d: (2 * math.pi - abs(d)) / (4 * math.pi**2)
    k = lambda d: math.cos(a * d / 2) ** 2
    opts = dict(limit=400, epsabs=1e-13, epsrel=1e-12)
    e1 = integrate.quad(lambda d: k(d) * dens(d), -2 * math.pi, 2 * math.pi, **opts)[0]
    e2 = integrate.quad(lambda d: k(d) ** 2 * dens(d), -2 * math.pi, 2 * math.pi, **opts)[0]
    return e1, e2


class TestVariance:
    def test_large_c_n1(self):
        assert var_uniform(AnalyticParams(1, 1, 1e6)) == pytest.approx(0.125, abs=1e-12)

    def test_large_c_n4(self):
        assert var_uniform(AnalyticParams(4, 2, 1e6)) == pytest.approx(0.375**4 - 0.5**8, abs=1e-12)
        assert 0.375**4 - 0.5**8 == pytest.approx(0.0158691, abs=1e-7)

    def test_small_c_n1(self):
        v = var_uniform(AnalyticParams(1, 1, 1e-3))
        assert v == pytest.approx(SMALL_C_ALPHA * 1e-12, rel=1e-3)
        assert v == pytest.approx(3.790e-12, rel=1e-3)

    @pytest.mark.parametrize("a", [0.05, 0.3, 0.7, 1.3, 4.2])
    def test_moments_cosine_form(self, a):
        p = AnalyticParams(1, 1, a)
        e1, e2 = cosine_form_moments(a)
        assert mean_uniform(p) == pytest.approx(e1, rel=1e-12)
        assert expressivity_expectation(p) == pytest.approx(e2, rel=1e-12)

    @pytest.mark.parametrize("n", [1, 3])
    @pytest.mark.parametrize("a", [0.2, 0.9, 2.5])
    def test_moments_quadrature(self, n, a):
        e1, e2 = quadrature_moments(a)
        p = AnalyticParams(n, 1, a)
        assert var_uniform(p) == pytest.approx(e2**n - e1 ** (2 * n), rel=1e-9)

    @given(st.integers(1, 8), st.floats(1e-3, 300))
    @settings(max_examples=200)
    def test_non_negative(self, n, lc):
        assert var_uniform(AnalyticParams(n, 1, lc)) >= 0

    @pytest.mark.parametrize("n", [1, 2, 4, 8])
    def test_single_interior_max(self, n):
        v = np.array([var_uniform(AnalyticParams(n, 2, c)) for c in GRID])
        i = int(np.argmax(v))
        assert 0 < i < len(GRID) - 1
        assert np.all(np.diff(v[: i + 1]) > 0)
        # past the peak the variance decays with small overshoot ripples onto the plateau
        assert np.all(v[i + 1 :] < v[i])

    def test_derivative_matches_finite_difference(self):
        p = AnalyticParams(3, 2, 0.21)
        h = 1e-6
        fd = (var_uniform(AnalyticParams(3, 2, 0.21 + h)) - var_uniform(AnalyticParams(3, 2, 0.21 - h))) / (2 * h)
        assert variance_derivative(p) == pytest.approx(fd, rel=1e-7)

    def test_tiny_c_stays_accurate(self):
        v = var_uniform(AnalyticParams(2, 1, 1e-7))
        assert v == pytest.approx(var_limit_small_c(AnalyticParams(2, 1, 1e-7)), rel=1e-6)


class TestLimits:
    def test_alpha(self):
        assert var_limit_small_c(AnalyticParams(1, 1, 1.0)) == pytest.approx(7 * math.pi**4 / 180, rel=1e-15)
        assert 7 * math.pi**4 / 180 == pytest.approx(3.78813, abs=1e-5)

    def test_alpha_linear_in_n(self):
        p1, p2 = AnalyticParams(1, 2, 0.3), AnalyticParams(2, 2, 0.3)
        assert var_limit_small_c(p2) == pytest.approx(2 * var_limit_small_c(p1), rel=1e-15)

    @pytest.mark.parametrize("n", [1, 2, 4])
    @pytest.mark.parametrize("lc", [1e-3, 3e-3, 1e-2])
    def test_small_c_within_one_percent(self, n, lc):
        p = AnalyticParams(n, 1, lc)
        assert var_limit_small_c(p) == pytest.approx(var_uniform(p), rel=0.01)

    def test_large_c(self):
        assert var_limit_large_c(1) == 0.125
        assert var_limit_large_c(2) == pytest.approx(0.078125, abs=1e-16)
        vals = [var_limit_large_c(n) for n in range(1, 30)]
        assert np.all(np.diff(vals) < 0)


class TestEigenvalues:
    def test_small(self):
        np.testing.assert_allclose(operator_eigenvalues(1e-9), [1, 0, 0, 0], atol=1e-12)

    def test_large(self):
        np.testing.assert_allclose(operator_eigenvalues(1e7), [0.5, 0.25, 0.25, 0], atol=1e-7)

    @given(st.floats(1e-4, 100))
    def test_trace(self, lc):
        lam = operator_eigenvalues(lc)
        assert sum(lam) == pytest.approx(1.0, abs=1e-12)
        assert lam[0] >= lam[2] and lam[3] == 0

    def test_at_0_7(self):
        assert sum(operator_eigenvalues(0.7)) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("lc", [0.3, 0.7, 1.5, 2.0])
    def test_against_discretised_operator(self, lc):
        # Nystrom discretisation of the one-qubit kernel operator on a fine grid
        M = 2000
        x = -np.pi + (np.arange(M) + 0.5) * 2 * np.pi / M
        K = np.cos(lc * (x[:, None] - x[None, :]) / 2) ** 2
        ev = np.sort(np.linalg.eigvalsh(K / M))[::-1][:3]
        np.testing.assert_allclose(ev, sorted(operator_eigenvalues(lc)[:3], reverse=True), atol=1e-5)

    def test_eta_max_limits(self):
        assert eta_max_analytic(AnalyticParams(4, 1, 1e-8)) == pytest.approx(1.0, abs=1e-12)
        assert eta_max_analytic(AnalyticParams(4, 1, 1e8)) == pytest.approx(0.0625, abs=1e-9)
        assert eta_max_limits(4) == (1.0, 0.0625)

    def test_eta_n1_is_lambda1(self):
        assert eta_max_analytic(AnalyticParams(1, 2, 0.4)) == operator_eigenvalues(0.8)[0]

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_eta_monotone_until_first_sinc_zero(self, n):
        cs = [c for c in GRID if 2 * c <= 1.0]
        v = [eta_max_analytic(AnalyticParams(n, 2, c)) for c in cs]
        assert np.all(np.diff(v) <= 1e-15)

    @pytest.mark.parametrize("lc", [1.5, 2.5])
    def test_eta_ripples_above_plateau(self, lc):
        # lambda_1 touches 1/2 at integer L c and overshoots in between; the
        # Nystrom check above confirms this is a property of the operator
        assert operator_eigenvalues(float(int(lc)))[0] == pytest.approx(0.5, abs=1e-15)
        assert operator_eigenvalues(lc)[0] > 0.5

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_eta_ripple_bounded(self, n):
        v = np.array([eta_max_analytic(AnalyticParams(n, 2, c)) for c in GRID])
        assert np.max(v - np.minimum.accumulate(v)) < 0.1 * (v[0] - v[-1])


class TestExpressivity:
    def test_large_c_n1(self):
        assert expressivity_expectation(AnalyticParams(1, 1, 1e8)) == pytest.approx(0.375, abs=1e-9)

    def test_small_c(self):
        assert expressivity_expectation(AnalyticParams(3, 1, 1e-8)) == pytest.approx(1.0, abs=1e-12)

    def test_n4_lc10(self):
        assert expressivity_expectation(AnalyticParams(4, 1, 10.0)) == pytest.approx(0.375**4, abs=1e-3)

    def test_limits(self):
        h = h_constant(2)
        assert expressivity_limits(2, h) == (1 - h, 0.375**2 - h)


class TestLayerShift:
    @pytest.mark.parametrize("n", [1, 2, 4, 6])
    def test_peak_scales_with_layers(self, n):
        products = np.array([variance_peak_c(n, L) * L for L in (1, 2, 4, 8, 16)])
        assert np.ptp(products) <= 4 * np.finfo(float).eps * products[0]
        assert products[0] == pytest.approx(peak_lc(n), rel=1e-15)

    def test_peak_is_stationary(self):
        c = variance_peak_c(4, 2)
        assert abs(variance_derivative(AnalyticParams(4, 2, c))) < 1e-12

    def test_grid_argmax_near_peak(self):
        c = argmax_variance_c(4, 2, GRID)
        ratio = GRID[1] / GRID[0]
        assert abs(math.log(c / variance_peak_c(4, 2))) <= math.log(ratio)


class TestMonteCarlo:
    def test_curve_tracks_analytic(self):
        for c in GRID:
            p = AnalyticParams(4, 2, c)
            var, eta, _ = monte_carlo_check(p, 720, rng_seed=0)
            assert eta == pytest.approx(eta_max_analytic(p), rel=0.1)
            assert var == pytest.approx(var_uniform(p), rel=0.1)

    def test_small_n_plateau_above_limit(self):
        var, _, _ = monte_carlo_check(AnalyticParams(4, 2, 10**1.5), 10, rng_seed=0)
        assert var > var_limit_large_c(4)

    @pytest.mark.parametrize("N", [2, 5, 50])
    def test_vanishes_at_small_c(self, N):
        var, _, _ = monte_carlo_check(AnalyticParams(1, 1, 1e-6), N, rng_seed=1)
        assert var < 1e-20

    def test_rejects_tiny_sample(self):
        with pytest.raises(ValidationError):
            monte_carlo_check(AnalyticParams(1, 1, 1.0), 1)


class TestParams:
    @pytest.mark.parametrize("kw", [dict(n=0, L=1, c=1.0), dict(n=1, L=0, c=1.0), dict(n=1, L=1, c=0.0)])
    def test_invalid(self, kw):
        with pytest.raises(ValidationError):
            AnalyticParams(**kw)

    def test_sinc_series(self):
        z = np.array([0.0, 1e-6, 1e-3, 1.0])
        np.testing.assert_allclose(sinc(z), [1.0, *(np.sin(z[1:]) / z[1:])], rtol=1e-15)
