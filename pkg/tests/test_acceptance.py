"""Acceptance suite: one test per acceptance criterion, each printing a
single PASS line with the measured values when it holds.

The heavy preset pipelines run once per session via module-scoped fixtures;
every criterion is evaluated at its stated tolerance, at full trial counts.
"""

import numpy as np
import pytest

from afcdlcz import oracle
from afcdlcz.analysis import cauchy_schwarz_r, g2_auto, g2_cross
from afcdlcz.cli import main
from afcdlcz.config import (
    CHANNEL_ANTISTOKES,
    CHANNEL_STOKES,
    EfficiencyBudget,
    build_schedule,
)
from afcdlcz.memory import infer_eta_rephasing, readout_budget
from afcdlcz.presets import run_preset
from afcdlcz.simulate import run_trials

from conftest import binomial_sigma, oracle_config

SEED = 20170831


def _report(name: str, passed: bool, detail: str) -> None:
    print(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
    assert passed, f"{name}: {detail}"


@pytest.fixture(scope="module")
def fig3b(tmp_path_factory):
    return run_preset("fig3b", tmp_path_factory.mktemp("fig3b"), seed=SEED, threads=2)


@pytest.fixture(scope="module")
def fig4a(tmp_path_factory):
    return run_preset("fig4a", tmp_path_factory.mktemp("fig4a"), seed=SEED, threads=2)


@pytest.fixture(scope="module")
def fig4c(tmp_path_factory):
    return run_preset("fig4c", tmp_path_factory.mktemp("fig4c"), seed=SEED, threads=2)


def test_budget_identity(capsys):
    # `budget` with the five measured factors prints 0.042.
    code = main(
        [
            "budget",
            "--eta-rp", "0.40", "--eta-reph", "0.36", "--eta-decoh", "0.64",
            "--beta-br", "0.60", "--beta-g", "0.76",
        ]
    )
    out = capsys.readouterr().out
    assert code == 0
    printed = None
    for line in out.splitlines():
        if line.strip().startswith("eta_RO"):
            printed = float(line.split("=")[1].split()[0])
    exact = readout_budget(
        EfficiencyBudget(eta_rp=0.40, eta_reph=0.36, beta_br=0.60, beta_g=0.76), 0.64
    )
    ok = printed is not None and abs(printed - 0.042) <= 1e-6 and abs(round(exact, 3) - 0.042) <= 1e-6
    with capsys.disabled():
        _report(
            "budget identity",
            ok,
            f"printed eta_RO = {printed}, exact product = {exact:.8f}",
        )


def test_afc_decomposition(capsys):
    value = infer_eta_rephasing(0.17, 5.4, 4.4, 0.4)
    with capsys.disabled():
        _report(
            "AFC decomposition",
            abs(value - 0.359) <= 0.005,
            f"inferred rephasing efficiency = {value:.4f} (0.359 +- 0.005)",
        )


def test_cauchy_schwarz_arithmetic(capsys):
    r, _ = cauchy_schwarz_r(11.9, 1.85, 1.75)
    with capsys.disabled():
        _report(
            "Cauchy-Schwarz arithmetic",
            abs(r - 43.7) <= 0.1,
            f"R(11.9, 1.85, 1.75) = {r:.4f} (43.7 +- 0.1)",
        )


def test_decay_round_trip(fig4a, capsys):
    tau = fig4a.report["decay_tau_us"]
    lw = fig4a.report["implied_linewidth_khz"]
    ok = 7.5 <= tau <= 9.1 and 43.0 <= lw <= 47.0
    with capsys.disabled():
        _report(
            "decay round trip",
            ok,
            f"fitted tau = {tau:.2f} us (band [7.5, 9.1]), "
            f"implied linewidth = {lw:.2f} kHz (band [43, 47])",
        )


def test_nonclassicality_desk_scale(fig3b, capsys):
    rep = fig3b.report
    g2 = rep["g2_cross_headline"]
    g2_ss = rep["g2_ss"]
    g2_aa = rep["g2_asas"]
    r_cs = rep["r_cauchy_schwarz"]
    r_sigma = rep["r_cauchy_schwarz_sigma"]
    ok = (
        17.0 <= g2 <= 25.0
        and 1.3 <= g2_ss <= 2.3
        and 1.3 <= g2_aa <= 2.3
        and r_cs - 3.0 * r_sigma > 1.0
    )
    with capsys.disabled():
        _report(
            "nonclassicality at desk scale",
            ok,
            f"g2_cross = {g2:.2f} in [17, 25]; g2_ss = {g2_ss:.3f}, "
            f"g2_asas = {g2_aa:.3f} in [1.3, 2.3]; "
            f"R = {r_cs:.1f} +- {r_sigma:.1f} (> 1 by 3 sigma)",
        )


def test_multimode_tradeoff(fig4c, capsys):
    rep = fig4c.report
    ok = (
        rep["n_modes"] == 11
        and rep["counts_pearson_r"] > 0.99
        and abs(rep["g2_slope_per_us"]) <= 2.0 * rep["g2_slope_sigma"]
    )
    with capsys.disabled():
        _report(
            "multimode tradeoff",
            ok,
            f"N_m = {rep['n_modes']}; Pearson r = {rep['counts_pearson_r']:.5f}; "
            f"g2 slope = {rep['g2_slope_per_us']:+.3f} +- {rep['g2_slope_sigma']:.3f} per us",
        )


@pytest.mark.parametrize("nbar", [0.01, 0.05, 0.2])
def test_oracle_equivalence(nbar, capsys):
    # Monte-Carlo click statistics against the exact truncated thermal
    # distribution, with the default arm transmissions in place.
    eta_s, eta_as = 0.75, 0.24
    cfg = oracle_config(nbar, eta_s=eta_s, eta_ro=1.0, eta_as=eta_as)
    schedule = build_schedule(cfg)
    n = 2_000_000
    stream = run_trials(cfg, n, seed=SEED + 1, pair_jitter_fwhm_ns=0.0)
    res = g2_cross(stream, schedule, window_ns=None)
    p_s_o, p_as_o, p_sas_o = oracle.cross_click_probs(nbar, eta_s, eta_as)
    g_o = p_sas_o / (p_s_o * p_as_o)
    pulls = {
        "p_s": (res.p_s - p_s_o) / binomial_sigma(p_s_o, n),
        "p_as": (res.p_as - p_as_o) / binomial_sigma(p_as_o, n),
        "p_sas": (res.p_coinc - p_sas_o) / binomial_sigma(p_sas_o, n),
        "g2_cross": (res.g2 - g_o) / res.sigma,
    }
    auto_stream = run_trials(
        cfg, n, seed=SEED + 2, splitter="stokes", channels=("S",),
        pair_jitter_fwhm_ns=0.0,
    )
    res_auto = g2_auto(auto_stream, schedule, CHANNEL_STOKES, delta_tau_ns=500.0)
    pulls["g2_auto"] = (res_auto.g2 - oracle.g2_auto_oracle(nbar, eta_s)) / res_auto.sigma
    worst = max(abs(v) for v in pulls.values())
    with capsys.disabled():
        _report(
            f"oracle equivalence (nbar = {nbar})",
            worst < 3.0,
            "max |pull| = "
            f"{worst:.2f} sigma over {sorted(pulls)} "
            f"(g2 {res.g2:.2f} vs oracle {g_o:.2f})",
        )


def test_classical_substitute_respects_r_bound(capsys):
    details = []
    ok = True
    for i, nbar in enumerate((0.05, 0.1, 0.2, 0.4, 0.8)):
        cfg = oracle_config(nbar)
        schedule = build_schedule(cfg)
        n = 500_000
        span = schedule.stokes_gate[1] - schedule.stokes_gate[0]
        cross = g2_cross(
            run_trials(cfg, n, seed=SEED + 10 + i, emission="poisson",
                       pair_jitter_fwhm_ns=0.0),
            schedule, window_ns=None,
        )
        ss = g2_auto(
            run_trials(cfg, n, seed=SEED + 20 + i, emission="poisson",
                       splitter="stokes", channels=("S",), pair_jitter_fwhm_ns=0.0),
            schedule, CHANNEL_STOKES, delta_tau_ns=span,
        )
        asas = g2_auto(
            run_trials(cfg, n, seed=SEED + 30 + i, emission="poisson",
                       splitter="antistokes", channels=("AS",), pair_jitter_fwhm_ns=0.0),
            schedule, CHANNEL_ANTISTOKES, delta_tau_ns=span,
        )
        r, sigma = cauchy_schwarz_r(
            cross.g2, ss.g2, asas.g2,
            sigma_cross=cross.sigma, sigma_ss=ss.sigma, sigma_asas=asas.sigma,
        )
        ok = ok and (r <= 1.0 + 3.0 * sigma)
        details.append(f"nbar={nbar}: R={r:.3f}+-{sigma:.3f}")
    with capsys.disabled():
        _report("classical substitute R bound", ok, "; ".join(details))


def test_timing_law(fig3b, capsys):
    rep = fig3b.report
    centroid = rep["coincidence_centroid_ns"]
    fwhm = rep["coincidence_fwhm_ns"]
    beta_g = rep["beta_g"]
    ok = (
        abs(centroid - 8000.0) <= 400.0
        and 790.0 <= fwhm <= 1090.0
        and 0.71 <= beta_g <= 0.81
    )
    with capsys.disabled():
        _report(
            "timing law",
            ok,
            f"centroid = {centroid:.0f} ns (8000 +- 400); FWHM = {fwhm:.0f} ns "
            f"(940 +- 150); beta_G = {beta_g:.3f} (0.76 +- 0.05)",
        )


def test_preset_band_checks_pass(fig3b, fig4a, fig4c, capsys):
    failures = [
        f"{res.name}:{band.name}"
        for res in (fig3b, fig4a, fig4c)
        for band in res.bands
        if not band.passed
    ]
    with capsys.disabled():
        _report(
            "reproduce preset band checks",
            not failures,
            "all preset bands green" if not failures else f"failed: {failures}",
        )


def test_determinism_byte_identical(tmp_path, capsys):
    # Same preset, same seed: every CSV byte-identical.  Same simulate
    # command, same seed: byte-identical event files.
    results = [
        run_preset("fig2c", tmp_path / f"rep{i}", seed=4242, scale=0.05)
        for i in range(2)
    ]
    csv_ok = all(
        a.read_bytes() == b.read_bytes()
        for a, b in zip(results[0].csv_paths, results[1].csv_paths)
    )
    events = []
    for i in range(2):
        path = tmp_path / f"ev{i}.csv"
        assert main(["simulate", "--trials", "150000", "--out", str(path), "--seed", "777"]) == 0
        events.append(path.read_bytes())
    with capsys.disabled():
        _report(
            "determinism",
            csv_ok and events[0] == events[1],
            "preset CSVs and event files byte-identical for equal seeds",
        )
