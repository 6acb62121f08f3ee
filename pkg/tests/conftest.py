import numpy as np
import pytest

from afcdlcz.config import EfficiencyBudget, ExperimentConfig


@pytest.fixture
def default_config():
    return ExperimentConfig()


def oracle_config(nbar: float, eta_s: float = 1.0, eta_ro: float = 1.0, eta_as: float = 1.0):
    """Single-mode, noise-free config whose thermal mean is exactly ``nbar``.

    The Stokes rate target is inverted so the calibration reproduces the
    requested mean photon number per trial.
    """
    p_click = 1.0 - 1.0 / (1.0 + nbar * eta_s)
    return ExperimentConfig(
        write_power_uW=1.0,
        stokes_prob_per_uW=p_click,
        stokes_window_us=0.5,
        gen_mode_width_ns=1000.0,
        readout_budget=EfficiencyBudget(eta_rp=eta_ro, eta_reph=1.0, beta_br=1.0, beta_g=0.76),
        spin_linewidth_kHz=1e-9,
        stokes_transmission=eta_s,
        antistokes_transmission=eta_as,
        dark_count_rate_hz=0.0,
        echo_leak_fraction=0.0,
        uncorrelated_noise_fraction_s=0.0,
        uncorrelated_noise_fraction_as=0.0,
    )


def binomial_sigma(p: float, n: int) -> float:
    return float(np.sqrt(max(p * (1.0 - p), 1.0 / n) / n))
