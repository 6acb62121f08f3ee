"""Exact click-probability oracle for thermal and Poisson pair sources.

Computes detection probabilities by direct enumeration of the truncated
photon-number distribution, independently of the Monte-Carlo sampling path.
Used by the self-test command and by the test suite to pin down expected
values for single- and two-mode configurations.

Model per temporal mode: the pair number n follows a thermal distribution
P(n) = nbar^n / (1 + nbar)^(n+1).  Given n, every Stokes photon is detected
with probability eta_s and every anti-Stokes partner with probability eta_as,
independently (binomial thinning).  Detectors report at most one click per
gate, so channel probabilities are click probabilities, not mean counts.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "thermal_pmf",
    "cross_click_probs",
    "auto_click_probs",
    "g2_cross_oracle",
    "g2_auto_oracle",
    "cross_click_probs_closed_form",
    "auto_click_probs_closed_form",
    "poisson_click_probs",
]

DEFAULT_CUTOFF = 20


def thermal_pmf(nbar: float, cutoff: int = DEFAULT_CUTOFF) -> np.ndarray:
    """Thermal photon-number distribution truncated at ``cutoff`` photons."""
    if nbar < 0:
        raise ValueError(f"mean photon number must be >= 0, got {nbar!r}")
    n = np.arange(cutoff + 1)
    if nbar == 0:
        pmf = np.zeros(cutoff + 1)
        pmf[0] = 1.0
        return pmf
    pmf = nbar**n / (1.0 + nbar) ** (n + 1)
    return pmf / pmf.sum()


def cross_click_probs(
    nbar: float, eta_s: float, eta_as: float, cutoff: int = DEFAULT_CUTOFF
) -> tuple[float, float, float]:
    """(p_s, p_as, p_s_as) for one thermal mode with thinned twin beams."""
    pmf = thermal_pmf(nbar, cutoff)
    n = np.arange(cutoff + 1)
    click_s = 1.0 - (1.0 - eta_s) ** n
    click_as = 1.0 - (1.0 - eta_as) ** n
    p_s = float(pmf @ click_s)
    p_as = float(pmf @ click_as)
    p_sas = float(pmf @ (click_s * click_as))
    return p_s, p_as, p_sas


def auto_click_probs(
    nbar: float, eta: float, cutoff: int = DEFAULT_CUTOFF
) -> tuple[float, float]:
    """(p_single_detector, p_both_detectors) behind a lossless 50/50 splitter.

    Each photon is detected with probability eta and then routed to one of
    two detectors with equal probability.
    """
    pmf = thermal_pmf(nbar, cutoff)
    n = np.arange(cutoff + 1)
    p_miss_one = (1.0 - eta / 2.0) ** n
    p_miss_both = (1.0 - eta) ** n
    p_det = float(pmf @ (1.0 - p_miss_one))
    p_both = float(pmf @ (1.0 - 2.0 * p_miss_one + p_miss_both))
    return p_det, p_both


def g2_cross_oracle(
    nbar: float, eta_s: float, eta_as: float, cutoff: int = DEFAULT_CUTOFF
) -> float:
    """Same-trial coincidence over cross-trial accidental, exactly."""
    p_s, p_as, p_sas = cross_click_probs(nbar, eta_s, eta_as, cutoff)
    return p_sas / (p_s * p_as)


def g2_auto_oracle(nbar: float, eta: float, cutoff: int = DEFAULT_CUTOFF) -> float:
    p_det, p_both = auto_click_probs(nbar, eta, cutoff)
    return p_both / (p_det * p_det)


# --- closed forms via the thermal probability generating function ----------
#
# For thermal n: E[z^n] = 1 / (1 + nbar (1 - z)), so the no-click
# probability after thinning eta is 1 / (1 + nbar eta).  These cover any
# number of independent modes and cross-check the enumeration above.


def _no_click(nbar: float, eta: float) -> float:
    return 1.0 / (1.0 + nbar * eta)


def cross_click_probs_closed_form(
    nbars: list[float], eta_s: float, eta_as: float
) -> tuple[float, float, float]:
    """(p_s, p_as, p_s_as) for independent thermal modes, no truncation."""
    q_s = q_as = q_none = 1.0
    eta_union = eta_s + eta_as - eta_s * eta_as
    for nbar in nbars:
        q_s *= _no_click(nbar, eta_s)
        q_as *= _no_click(nbar, eta_as)
        q_none *= _no_click(nbar, eta_union)
    p_s = 1.0 - q_s
    p_as = 1.0 - q_as
    p_sas = 1.0 - q_s - q_as + q_none
    return p_s, p_as, p_sas


def auto_click_probs_closed_form(
    nbars: list[float], eta: float
) -> tuple[float, float]:
    q_one = q_all = 1.0
    for nbar in nbars:
        q_one *= _no_click(nbar, eta / 2.0)
        q_all *= _no_click(nbar, eta)
    p_det = 1.0 - q_one
    p_both = 1.0 - 2.0 * q_one + q_all
    return p_det, p_both


def poisson_click_probs(lam_s: float, lam_as: float, eta_s: float, eta_as: float):
    """Click probabilities for independent Poisson brightness on each channel.

    The classical substitute: no pair correlation at all, so the coincidence
    probability factorizes and every g2 equals one.
    """
    p_s = 1.0 - np.exp(-lam_s * eta_s)
    p_as = 1.0 - np.exp(-lam_as * eta_as)
    return float(p_s), float(p_as), float(p_s * p_as)
