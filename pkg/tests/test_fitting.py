import math

import numpy as np
import pytest

from afcdlcz.fitting import (
    FitError,
    fit_gaussian_decay,
    fit_gaussian_peak,
    fit_linear,
    pearson_r,
)


def grid_minimize_linear(x, y, w, span=10.0, rounds=8, points=41):
    """Brute-force weighted least squares by iterative grid refinement."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    w = np.asarray(w, float)
    best = (0.0, float(np.average(y, weights=w)))
    width_a, width_b = span, span
    for _ in range(rounds):
        a_grid = np.linspace(best[0] - width_a, best[0] + width_a, points)
        b_grid = np.linspace(best[1] - width_b, best[1] + width_b, points)
        costs = np.array(
            [
                [float(np.sum(w * (y - a * x - b) ** 2)) for b in b_grid]
                for a in a_grid
            ]
        )
        ia, ib = np.unravel_index(np.argmin(costs), costs.shape)
        best = (float(a_grid[ia]), float(b_grid[ib]))
        width_a /= points / 4
        width_b /= points / 4
    return best


class TestLinearFit:
    def test_exact_proportionality(self):
        fit = fit_linear([1.0, 2.0, 3.0], [2.0, 4.0, 6.0])
        assert fit.slope == pytest.approx(2.0, abs=1e-12)
        assert fit.intercept == pytest.approx(0.0, abs=1e-12)

    def test_matches_grid_oracle_on_heteroscedastic_data(self):
        rng = np.random.default_rng(11)
        x = np.linspace(0.0, 5.0, 12)
        sigma = np.linspace(0.1, 1.0, 12)
        y = 3.0 * x + 1.0 + rng.normal(0.0, sigma)
        fit = fit_linear(x, y, sigma=sigma)
        slope_ref, intercept_ref = grid_minimize_linear(x, y, 1.0 / sigma**2)
        assert fit.slope == pytest.approx(slope_ref, abs=1e-6)
        assert fit.intercept == pytest.approx(intercept_ref, abs=1e-6)

    def test_degenerate_abscissae(self):
        with pytest.raises(FitError):
            fit_linear([2.0, 2.0, 2.0], [1.0, 2.0, 3.0])

    def test_slope_error_scale(self):
        rng = np.random.default_rng(5)
        x = np.arange(50.0)
        pulls = []
        for _ in range(40):
            y = 0.7 * x + 2.0 + rng.normal(0, 1.0, len(x))
            fit = fit_linear(x, y, sigma=np.ones_like(x))
            pulls.append((fit.slope - 0.7) / fit.slope_sigma)
        assert abs(np.mean(pulls)) < 0.6
        assert 0.5 < np.std(pulls) < 1.6


class TestGaussianDecayFit:
    def test_exact_recovery_noiseless(self):
        t = np.array([0.5, 2.0, 4.0, 6.0, 9.0, 12.0])
        y = 1.0 * np.exp(-((t / 5.0) ** 2))
        fit = fit_gaussian_decay(t, y)
        assert fit.amplitude == pytest.approx(1.0, abs=1e-6)
        assert fit.tau == pytest.approx(5.0, abs=1e-6)

    def test_three_point_log_linearization_cross_check(self):
        # With three exact points the closed-form log-linear solution and the
        # iterative fit must coincide.
        a_true, tau_true = 0.73, 8.1
        t = np.array([2.0, 6.0, 11.0])
        y = a_true * np.exp(-((t / tau_true) ** 2))
        coeffs = np.polyfit(t**2, np.log(y), 1)
        tau_closed = 1.0 / math.sqrt(-coeffs[0])
        a_closed = math.exp(coeffs[1])
        fit = fit_gaussian_decay(t, y)
        assert fit.tau == pytest.approx(tau_closed, abs=1e-6)
        assert fit.amplitude == pytest.approx(a_closed, abs=1e-6)
        assert tau_closed == pytest.approx(tau_true, abs=1e-9)

    def test_noisy_fit_within_errors(self):
        rng = np.random.default_rng(21)
        t = np.linspace(1.0, 14.0, 8)
        sigma = np.full_like(t, 0.01)
        y = 0.9 * np.exp(-((t / 8.3) ** 2)) + rng.normal(0, 0.01, len(t))
        fit = fit_gaussian_decay(t, y, sigma=sigma)
        assert fit.tau == pytest.approx(8.3, abs=4 * fit.tau_sigma)

    def test_linewidth_conversion(self):
        t = np.linspace(1.0, 14.0, 6)
        y = np.exp(-((t / 8.3281) ** 2))
        fit = fit_gaussian_decay(t, y)
        assert fit.linewidth_khz == pytest.approx(45.0, abs=0.01)

    def test_degenerate_inputs(self):
        with pytest.raises(FitError):
            fit_gaussian_decay([1.0, 1.0, 1.0], [0.5, 0.5, 0.5])
        with pytest.raises(FitError):
            fit_gaussian_decay([1.0, 2.0], [0.5, 0.4])


class TestGaussianPeakFit:
    def test_recovers_binned_gaussian(self):
        centers = np.arange(5000.0, 11000.0, 400.0) + 200.0
        amp, mean, width = 350.0, 8000.0, 420.0
        y = amp * np.exp(-((centers - mean) ** 2) / (2 * width**2))
        fit = fit_gaussian_peak(centers, y)
        assert fit.center == pytest.approx(mean, abs=1e-3)
        assert fit.sigma == pytest.approx(width, rel=1e-4)
        assert fit.fwhm == pytest.approx(2.3548 * width, rel=1e-3)

    def test_needs_positive_counts(self):
        with pytest.raises(FitError):
            fit_gaussian_peak([1.0, 2.0, 3.0], [0.0, 0.0, 0.0])


def test_pearson_r_exact_line():
    assert pearson_r([1, 2, 3, 4], [3, 6, 9, 12]) == pytest.approx(1.0, abs=1e-12)
    assert pearson_r([1, 2, 3, 4], [5, 3, 1, -1]) == pytest.approx(-1.0, abs=1e-12)
