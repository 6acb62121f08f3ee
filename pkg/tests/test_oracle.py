import numpy as np
import pytest

from afcdlcz import oracle


@pytest.mark.parametrize("nbar", [0.0, 0.01, 0.05, 0.2])
def test_thermal_pmf_matches_formula(nbar):
    pmf = oracle.thermal_pmf(nbar, cutoff=30)
    assert pmf.sum() == pytest.approx(1.0, abs=1e-12)
    if nbar > 0:
        n = np.arange(31)
        raw = nbar**n / (1.0 + nbar) ** (n + 1)
        assert np.allclose(pmf, raw / raw.sum(), atol=1e-15)
    else:
        assert pmf[0] == 1.0


def test_truncation_is_converged_at_default_cutoff():
    for nbar in (0.05, 0.2):
        a = oracle.cross_click_probs(nbar, 0.75, 0.24, cutoff=20)
        b = oracle.cross_click_probs(nbar, 0.75, 0.24, cutoff=60)
        assert np.allclose(a, b, atol=1e-10)


def test_lossless_identities():
    # With unit efficiency every occupied trial clicks on both channels, so
    # p_s = p_as = p_sas = nbar / (1 + nbar) and g2 = 1 + 1/nbar.
    for nbar in (0.01, 0.05, 0.2):
        p_s, p_as, p_sas = oracle.cross_click_probs(nbar, 1.0, 1.0)
        expected = nbar / (1.0 + nbar)
        assert p_s == pytest.approx(expected, abs=1e-12)
        assert p_as == pytest.approx(expected, abs=1e-12)
        assert p_sas == pytest.approx(expected, abs=1e-12)
        assert oracle.g2_cross_oracle(nbar, 1.0, 1.0) == pytest.approx(
            1.0 + 1.0 / nbar, abs=1e-9
        )
    assert oracle.g2_cross_oracle(0.05, 1.0, 1.0) == pytest.approx(21.0, abs=1e-9)


def test_enumeration_matches_closed_form_single_mode():
    for nbar in (0.01, 0.05, 0.2):
        for eta_s, eta_as in ((1.0, 1.0), (0.75, 0.24), (0.5, 0.1)):
            enum = oracle.cross_click_probs(nbar, eta_s, eta_as, cutoff=60)
            closed = oracle.cross_click_probs_closed_form([nbar], eta_s, eta_as)
            assert np.allclose(enum, closed, atol=1e-10)


def test_two_mode_closed_form_composes_single_modes():
    nbars = [0.03, 0.07]
    eta_s, eta_as = 0.75, 0.24
    p_s, p_as, p_sas = oracle.cross_click_probs_closed_form(nbars, eta_s, eta_as)
    singles = [oracle.cross_click_probs_closed_form([n], eta_s, eta_as) for n in nbars]
    assert p_s == pytest.approx(1 - (1 - singles[0][0]) * (1 - singles[1][0]), abs=1e-12)
    assert p_as == pytest.approx(1 - (1 - singles[0][1]) * (1 - singles[1][1]), abs=1e-12)
    # Coincidence from independent modes via inclusion-exclusion on the
    # per-mode no-click probabilities.
    q_s = (1 - singles[0][0]) * (1 - singles[1][0])
    q_as = (1 - singles[0][1]) * (1 - singles[1][1])
    q_none = np.prod(
        [1 - s[0] - s[1] + s[2] for s in singles]
    )
    assert p_sas == pytest.approx(1 - q_s - q_as + q_none, abs=1e-12)


def test_auto_click_probs_closed_form_agrees():
    for nbar in (0.05, 0.2):
        for eta in (1.0, 0.75):
            enum = oracle.auto_click_probs(nbar, eta, cutoff=60)
            closed = oracle.auto_click_probs_closed_form([nbar], eta)
            assert np.allclose(enum, closed, atol=1e-10)


def test_auto_bunching_near_two_at_low_brightness():
    # Single-mode thermal light bunches toward g2 = 2 in the dilute limit.
    assert oracle.g2_auto_oracle(0.001, 1.0) == pytest.approx(2.0, abs=2e-3)
    # At nbar = 0.05 multi-photon saturation pulls it slightly below 2.
    assert oracle.g2_auto_oracle(0.05, 1.0) == pytest.approx(1.9524, abs=1e-4)


def test_poisson_classical_factorizes():
    p_s, p_as, p_sas = oracle.poisson_click_probs(0.4, 0.3, 0.75, 0.24)
    assert p_sas == pytest.approx(p_s * p_as, abs=1e-15)


def test_negative_nbar_rejected():
    with pytest.raises(ValueError):
        oracle.thermal_pmf(-0.1)
