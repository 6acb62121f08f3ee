"""Least-squares fitting used by the analysis layer.

Nonlinear fits use damped (Levenberg-Marquardt) least squares with analytic
Jacobians, initialized from a log-linearization and iterated until the
relative step falls below 1e-9 or 200 iterations, whichever comes first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .memory import tau_us_to_linewidth_khz

__all__ = [
    "FitError",
    "LinearFit",
    "DecayFit",
    "PeakFit",
    "fit_linear",
    "fit_gaussian_decay",
    "fit_gaussian_peak",
    "pearson_r",
]

_REL_STEP_TOL = 1e-9
_MAX_ITER = 200


class FitError(ValueError):
    """Raised for degenerate fit inputs or failed convergence."""


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    slope_sigma: float
    intercept_sigma: float


@dataclass(frozen=True)
class DecayFit:
    amplitude: float
    tau: float
    amplitude_sigma: float
    tau_sigma: float
    n_iterations: int

    @property
    def linewidth_khz(self) -> float:
        """FWHM spin linewidth implied by the fitted 1/e time (in us)."""
        return tau_us_to_linewidth_khz(self.tau)

    @property
    def linewidth_sigma_khz(self) -> float:
        return self.linewidth_khz * self.tau_sigma / self.tau


@dataclass(frozen=True)
class PeakFit:
    amplitude: float
    center: float
    sigma: float

    @property
    def fwhm(self) -> float:
        return 2.0 * math.sqrt(2.0 * math.log(2.0)) * self.sigma


def _as_arrays(x, y, sigma):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise FitError("x and y must be 1-d arrays of equal length")
    if sigma is None:
        w = np.ones_like(x)
    else:
        sigma = np.asarray(sigma, dtype=float)
        if sigma.shape != x.shape:
            raise FitError("sigma must match the data shape")
        if np.any(sigma <= 0):
            raise FitError("sigma values must be positive")
        w = 1.0 / sigma**2
    return x, y, w


def fit_linear(x, y, sigma=None) -> LinearFit:
    """Weighted ordinary least squares, y = slope * x + intercept."""
    x, y, w = _as_arrays(x, y, sigma)
    if len(x) < 2 or np.all(x == x[0]):
        raise FitError("need at least two distinct abscissae")
    sw = w.sum()
    mx = (w * x).sum() / sw
    my = (w * y).sum() / sw
    sxx = (w * (x - mx) ** 2).sum()
    sxy = (w * (x - mx) * (y - my)).sum()
    if sxx == 0:
        raise FitError("degenerate abscissae")
    slope = sxy / sxx
    intercept = my - slope * mx
    if sigma is None:
        resid = y - slope * x - intercept
        dof = max(len(x) - 2, 1)
        s2 = float(resid @ resid) / dof
    else:
        s2 = 1.0
    slope_sigma = math.sqrt(s2 / sxx)
    intercept_sigma = math.sqrt(s2 * (1.0 / sw + mx**2 / sxx))
    return LinearFit(slope, intercept, slope_sigma, intercept_sigma)


def _lm(model, jacobian, p0, x, y, w):
    """Shared Levenberg-Marquardt loop.  Returns (params, covariance, iters)."""
    p = np.asarray(p0, dtype=float)
    lam = 1e-3
    cost = float(w @ (y - model(x, p)) ** 2)
    n_iter = 0
    for n_iter in range(1, _MAX_ITER + 1):
        r = y - model(x, p)
        jac = jacobian(x, p)
        jtw = jac.T * w
        hess = jtw @ jac
        grad = jtw @ r
        stepped = False
        for _ in range(40):
            damped = hess + lam * np.diag(np.diag(hess))
            try:
                delta = np.linalg.solve(damped, grad)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            trial = p + delta
            trial_cost = float(w @ (y - model(x, trial)) ** 2)
            if np.isfinite(trial_cost) and trial_cost <= cost:
                p, cost = trial, trial_cost
                lam = max(lam * 0.3, 1e-12)
                stepped = True
                break
            lam *= 10.0
        if not stepped:
            break
        scale = np.maximum(np.abs(p), 1e-30)
        if np.max(np.abs(delta) / scale) < _REL_STEP_TOL:
            break
    jac = jacobian(x, p)
    jtw = jac.T * w
    try:
        cov = np.linalg.inv(jtw @ jac)
    except np.linalg.LinAlgError as exc:
        raise FitError("singular normal equations at the fit optimum") from exc
    return p, cov, n_iter


def fit_gaussian_decay(t, y, sigma=None) -> DecayFit:
    """Fit y = A * exp(-(t/tau)^2).

    Parameter errors come from the inverse weighted normal equations; when no
    sigmas are given they are scaled by the reduced chi-square.
    """
    t, y, w = _as_arrays(t, y, sigma)
    if len(t) < 3:
        raise FitError("need at least three points for a decay fit")
    if np.all(t == t[0]):
        raise FitError("degenerate input: all abscissae equal")

    pos = y > 0
    if pos.sum() >= 2 and not np.all(t[pos] == t[pos][0]):
        lin = fit_linear(t[pos] ** 2, np.log(y[pos]))
        if lin.slope < 0:
            tau0 = 1.0 / math.sqrt(-lin.slope)
            a0 = math.exp(lin.intercept)
        else:
            tau0 = float(np.max(np.abs(t))) or 1.0
            a0 = float(np.max(y))
    else:
        tau0 = float(np.max(np.abs(t))) or 1.0
        a0 = float(np.max(y)) if np.any(pos) else 1.0

    def model(x, p):
        return p[0] * np.exp(-((x / p[1]) ** 2))

    def jacobian(x, p):
        e = np.exp(-((x / p[1]) ** 2))
        return np.column_stack([e, p[0] * e * 2.0 * x**2 / p[1] ** 3])

    p, cov, n_iter = _lm(model, jacobian, [a0, tau0], t, y, w)
    if sigma is None:
        resid = y - model(t, p)
        dof = max(len(t) - 2, 1)
        cov = cov * float(resid @ resid) / dof
    return DecayFit(
        amplitude=float(p[0]),
        tau=float(abs(p[1])),
        amplitude_sigma=float(math.sqrt(max(cov[0, 0], 0.0))),
        tau_sigma=float(math.sqrt(max(cov[1, 1], 0.0))),
        n_iterations=n_iter,
    )


def fit_gaussian_peak(x, y, sigma=None) -> PeakFit:
    """Fit y = A * exp(-(x - x0)^2 / (2 s^2)) to a histogram peak."""
    x, y, w = _as_arrays(x, y, sigma)
    if len(x) < 3:
        raise FitError("need at least three points for a peak fit")
    total = y.sum()
    if total <= 0:
        raise FitError("peak fit needs positive counts")
    x0 = float((x * y).sum() / total)
    var = float(((x - x0) ** 2 * y).sum() / total)
    s0 = math.sqrt(var) if var > 0 else (np.ptp(x) / 4 or 1.0)
    a0 = float(y.max())

    def model(xv, p):
        return p[0] * np.exp(-((xv - p[1]) ** 2) / (2.0 * p[2] ** 2))

    def jacobian(xv, p):
        u = xv - p[1]
        e = np.exp(-(u**2) / (2.0 * p[2] ** 2))
        return np.column_stack(
            [e, p[0] * e * u / p[2] ** 2, p[0] * e * u**2 / p[2] ** 3]
        )

    p, _, _ = _lm(model, jacobian, [a0, x0, s0], x, y, w)
    return PeakFit(amplitude=float(p[0]), center=float(p[1]), sigma=float(abs(p[2])))


def pearson_r(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2:
        raise FitError("need at least two points for a correlation coefficient")
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float(xc @ xc) * float(yc @ yc))
    if denom == 0:
        raise FitError("zero variance input")
    return float(xc @ yc) / denom
