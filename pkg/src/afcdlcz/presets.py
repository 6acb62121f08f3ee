"""Reproduction presets: canned simulate + analyze pipelines that emit CSV
bundles and a summary report with pass/fail band checks.

Each preset derives independent sub-run seeds from the master seed, so a
preset is a pure function of (config defaults, seed, scale).  ``scale``
multiplies every trial count; band checks are evaluated at any scale but
only meant to hold at scale >= 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    DEFAULT_OFFSETS,
    cauchy_schwarz_r,
    coincidence_histogram,
    g2_auto,
    g2_cross,
    multimode_analysis,
    readout_efficiency,
    timing_metrics,
)
from .config import (
    CHANNEL_ANTISTOKES,
    CHANNEL_STOKES,
    ExperimentConfig,
    build_schedule,
    config_hash,
)
from .events import EventStream
from .fitting import fit_gaussian_decay, fit_linear
from .simulate import run_trials, sweep_config

__all__ = ["PRESET_NAMES", "BandCheck", "PresetResult", "run_preset"]

PRESET_NAMES = ("fig2c", "fig3b", "fig3c", "fig4a", "fig4c")

_SPLITTER_POWER_UW = 192.0  # elevated write power for the splitter runs


@dataclass(frozen=True)
class BandCheck:
    name: str
    passed: bool
    detail: str


@dataclass
class PresetResult:
    name: str
    out_dir: Path
    seed: int
    scale: float
    report: dict
    bands: list[BandCheck]
    csv_paths: list[Path] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(b.passed for b in self.bands)


def _derived_seed(seed: int, tag: int) -> int:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(2, tag))
    return int(ss.generate_state(1, np.uint64)[0])


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


class _Bundle:
    """Accumulates CSVs, report keys and band checks for one preset run."""

    def __init__(self, name: str, out_dir: Path, cfg: ExperimentConfig, seed: int, scale: float):
        self.name = name
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.cfg = cfg
        self.seed = seed
        self.scale = scale
        self.report: dict = {}
        self.bands: list[BandCheck] = []
        self.csv_paths: list[Path] = []

    def header_lines(self, extra: dict | None = None) -> list[str]:
        meta = {
            "preset": self.name,
            "tool": f"afcdlcz {__version__}",
            "config_hash": config_hash(self.cfg),
            "seed": self.seed,
            "scale": self.scale,
            "duty_cycle_assumed": 1.0,
        }
        meta.update(extra or {})
        return [f"# {k}={_fmt(v)}" for k, v in meta.items()]

    def write_csv(self, filename: str, columns: list[str], rows, extra_meta: dict | None = None) -> Path:
        path = self.out_dir / filename
        lines = self.header_lines(extra_meta)
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        path.write_text("\n".join(lines) + "\n")
        self.csv_paths.append(path)
        return path

    def band(self, name: str, passed: bool, detail: str) -> None:
        self.bands.append(BandCheck(name, bool(passed), detail))

    def finish(self) -> PresetResult:
        report_path = self.out_dir / f"{self.name}_report.txt"
        lines = self.header_lines()
        for key in sorted(self.report):
            lines.append(f"{key} = {_fmt(self.report[key])}")
        lines.append("")
        for b in self.bands:
            status = "PASS" if b.passed else "FAIL"
            lines.append(f"[{status}] {b.name}: {b.detail}")
        report_path.write_text("\n".join(lines) + "\n")
        (self.out_dir / f"{self.name}_report.json").write_text(
            json.dumps(
                {
                    "preset": self.name,
                    "seed": self.seed,
                    "scale": self.scale,
                    "report": self.report,
                    "bands": [
                        {"name": b.name, "passed": b.passed, "detail": b.detail}
                        for b in self.bands
                    ],
                },
                indent=2,
                sort_keys=True,
            )
            + "\n"
        )
        return PresetResult(
            name=self.name,
            out_dir=self.out_dir,
            seed=self.seed,
            scale=self.scale,
            report=self.report,
            bands=self.bands,
            csv_paths=self.csv_paths,
        )


def _trials(base: int, scale: float) -> int:
    return max(1000, int(base * scale))


# --- fig2c: Stokes rate linearity -------------------------------------------


def _preset_fig2c(cfg, out_dir, seed, scale, threads) -> PresetResult:
    b = _Bundle("fig2c", out_dir, cfg, seed, scale)
    powers = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0]
    n = _trials(400_000, scale)
    rows = []
    p_values, sigmas = [], []
    for i, power in enumerate(powers):
        run_cfg = sweep_config(cfg, "write_power", power)
        stream = run_trials(
            run_cfg, n, seed=_derived_seed(seed, i), base_cfg=cfg, threads=threads
        )
        p_s = float(np.sum(stream.channel == CHANNEL_STOKES)) / n
        sigma = math.sqrt(max(p_s, 1.0 / n) / n)
        rows.append((power, p_s, sigma))
        p_values.append(p_s)
        sigmas.append(sigma)
    b.write_csv(
        "fig2c_stokes_rate.csv",
        ["write_power_uW", "p_s_detected", "p_s_sigma"],
        rows,
        {"n_trials_per_point": n},
    )
    fit = fit_linear(powers, p_values, sigma=sigmas)
    b.report.update(
        {
            "slope_per_uW": fit.slope,
            "slope_sigma": fit.slope_sigma,
            "intercept": fit.intercept,
            "intercept_sigma": fit.intercept_sigma,
            "configured_slope_per_uW": cfg.stokes_prob_per_uW,
        }
    )
    dev = abs(fit.slope - cfg.stokes_prob_per_uW)
    b.band(
        "slope_recovered_3sigma",
        dev <= 3.0 * fit.slope_sigma,
        f"slope {fit.slope:.6g} vs configured {cfg.stokes_prob_per_uW:.6g} "
        f"(|diff| = {dev:.2g}, 3 sigma = {3 * fit.slope_sigma:.2g})",
    )
    return b.finish()


# --- fig3b: nonclassical correlations at the paper's operating points --------


def _offsets_table(stream: EventStream, schedule, center, window_ns):
    """Same-trial bar plus accidental bars at offsets -5..5 (Fig 3b analog)."""
    from .analysis import _channel_arrays, _pair_sums, _window_counts

    s_trial, s_t, _ = _channel_arrays(stream, CHANNEL_STOKES)
    a_trial, a_t, _ = _channel_arrays(stream, CHANNEL_ANTISTOKES)
    rows = []
    for k in range(-5, 6):
        sums = _pair_sums(s_trial, s_t, a_trial, a_t, schedule.read_t_ns, k)
        rows.append((k, _window_counts(sums, center, window_ns)))
    return rows


def _preset_fig3b(cfg, out_dir, seed, scale, threads) -> PresetResult:
    b = _Bundle("fig3b", out_dir, cfg, seed, scale)
    schedule = build_schedule(cfg)
    afc_ns = schedule.afc_delay_ns
    bin_ns, window_ns = 400, 1000.0

    # Run A: cross-correlation at the headline write power.
    n_a = _trials(40_000_000, scale)
    stream_a = run_trials(cfg, n_a, seed=_derived_seed(seed, 0), threads=threads)
    res_a = g2_cross(stream_a, schedule, bin_ns=bin_ns, window_ns=window_ns)
    tm = timing_metrics(stream_a, schedule, bin_ns=bin_ns, window_ns=window_ns)
    ro = readout_efficiency(stream_a, schedule, cfg, bin_ns=bin_ns, window_ns=window_ns)

    hist = coincidence_histogram(stream_a, schedule, bin_ns=bin_ns)
    b.write_csv(
        "fig3b_sum_histogram.csv",
        ["bin_start_ns", "bin_center_us", "coincidences"],
        [
            (int(e), (int(e) + bin_ns / 2) / 1e3, int(c))
            for e, c in zip(hist.sum_edges_ns[:-1], hist.sum_counts)
        ],
        {"n_trials": n_a, "write_power_uW": cfg.write_power_uW},
    )
    b.write_csv(
        "fig3b_stokes_histogram.csv",
        ["bin_start_ns", "bin_center_us", "counts"],
        [
            (int(e), (int(e) + bin_ns / 2) / 1e3, int(c))
            for e, c in zip(hist.stokes_edges_ns[:-1], hist.stokes_counts)
        ],
        {"n_trials": n_a, "write_power_uW": cfg.write_power_uW},
    )
    b.write_csv(
        "fig3b_antistokes_histogram.csv",
        ["bin_start_ns", "bin_center_us", "counts"],
        [
            (int(e), (int(e) + bin_ns / 2) / 1e3, int(c))
            for e, c in zip(hist.antistokes_edges_ns[:-1], hist.antistokes_counts)
        ],
        {"n_trials": n_a, "write_power_uW": cfg.write_power_uW},
    )
    trials_per_hour = 3600.0 / (cfg.trial_period_us * 1e-6)
    offsets_rows = [
        (k, c, c / n_a * trials_per_hour)
        for k, c in _offsets_table(stream_a, schedule, res_a.window_center_ns, window_ns)
    ]
    b.write_csv(
        "fig3b_offsets.csv",
        ["trial_offset", "coincidences", "coincidences_per_hour"],
        offsets_rows,
        {"n_trials": n_a, "window_ns": window_ns},
    )

    # Runs B-D: splitter autocorrelations and the Cauchy-Schwarz ratio at an
    # elevated write power where the splitter statistics are collectable.
    cfg_hi = cfg.with_(write_power_uW=_SPLITTER_POWER_UW)
    n_b = _trials(20_000_000, scale)
    stream_b = run_trials(
        cfg_hi, n_b, seed=_derived_seed(seed, 1), base_cfg=cfg,
        splitter="stokes", channels=("S",), threads=threads,
    )
    res_ss = g2_auto(stream_b, schedule, CHANNEL_STOKES, delta_tau_ns=window_ns)

    n_c = _trials(600_000_000, scale)
    stream_c = run_trials(
        cfg_hi, n_c, seed=_derived_seed(seed, 2), base_cfg=cfg,
        splitter="antistokes", channels=("AS",), threads=threads,
    )
    res_aa = g2_auto(stream_c, schedule, CHANNEL_ANTISTOKES, delta_tau_ns=window_ns)

    n_d = _trials(40_000_000, scale)
    stream_d = run_trials(
        cfg_hi, n_d, seed=_derived_seed(seed, 3), base_cfg=cfg, threads=threads
    )
    res_d = g2_cross(stream_d, schedule, bin_ns=bin_ns, window_ns=window_ns)
    r_cs, r_sigma = cauchy_schwarz_r(
        res_d.g2, res_ss.g2, res_aa.g2,
        sigma_cross=res_d.sigma, sigma_ss=res_ss.sigma, sigma_asas=res_aa.sigma,
    )

    b.write_csv(
        "fig3b_correlations.csv",
        ["quantity", "write_power_uW", "value", "sigma"],
        [
            ("g2_cross", cfg.write_power_uW, res_a.g2, res_a.sigma),
            ("g2_cross", cfg_hi.write_power_uW, res_d.g2, res_d.sigma),
            ("g2_ss", cfg_hi.write_power_uW, res_ss.g2, res_ss.sigma),
            ("g2_asas", cfg_hi.write_power_uW, res_aa.g2, res_aa.sigma),
            ("r_cauchy_schwarz", cfg_hi.write_power_uW, r_cs, r_sigma),
            ("eta_ro", cfg.write_power_uW, ro.eta_ro, ro.sigma),
        ],
    )

    b.report.update(
        {
            "g2_cross_headline": res_a.g2,
            "g2_cross_headline_sigma": res_a.sigma,
            "headline_write_power_uW": cfg.write_power_uW,
            "g2_cross_splitter_power": res_d.g2,
            "g2_cross_splitter_power_sigma": res_d.sigma,
            "splitter_write_power_uW": cfg_hi.write_power_uW,
            "g2_ss": res_ss.g2,
            "g2_ss_sigma": res_ss.sigma,
            "g2_asas": res_aa.g2,
            "g2_asas_sigma": res_aa.sigma,
            "r_cauchy_schwarz": r_cs,
            "r_cauchy_schwarz_sigma": r_sigma,
            "eta_ro": ro.eta_ro,
            "eta_ro_sigma": ro.sigma,
            "eta_ro_detected": ro.eta_ro_detected,
            "p_s": res_a.p_s,
            "p_as": res_a.p_as,
            "coincidence_centroid_ns": tm.centroid_ns,
            "coincidence_fwhm_ns": tm.fwhm_ns,
            "beta_g": tm.beta_g,
            "window_center_ns": res_a.window_center_ns,
        }
    )

    b.band(
        "g2_cross_17_25",
        17.0 <= res_a.g2 <= 25.0,
        f"g2_cross = {res_a.g2:.2f} +- {res_a.sigma:.2f} (band [17, 25])",
    )
    b.band(
        "g2_ss_band",
        1.3 <= res_ss.g2 <= 2.3,
        f"g2_ss = {res_ss.g2:.3f} +- {res_ss.sigma:.3f} (band [1.3, 2.3])",
    )
    b.band(
        "g2_asas_band",
        1.3 <= res_aa.g2 <= 2.3,
        f"g2_asas = {res_aa.g2:.3f} +- {res_aa.sigma:.3f} (band [1.3, 2.3])",
    )
    b.band(
        "cauchy_schwarz_violated_3sigma",
        r_cs - 3.0 * r_sigma > 1.0,
        f"R = {r_cs:.1f} +- {r_sigma:.1f}, R - 3 sigma = {r_cs - 3 * r_sigma:.1f} > 1",
    )
    b.band(
        "peak_centroid_within_bin",
        abs(tm.centroid_ns - afc_ns) <= bin_ns,
        f"centroid {tm.centroid_ns:.0f} ns vs rephasing delay {afc_ns} ns (one bin = {bin_ns} ns)",
    )
    b.band(
        "peak_fwhm_band",
        790.0 <= tm.fwhm_ns <= 1090.0,
        f"FWHM = {tm.fwhm_ns:.0f} ns (band 940 +- 150 ns)",
    )
    b.band(
        "beta_g_band",
        0.71 <= tm.beta_g <= 0.81,
        f"beta_G = {tm.beta_g:.3f} (band 0.76 +- 0.05)",
    )
    return b.finish()


# --- fig3c: correlation versus Stokes probability ----------------------------


def _preset_fig3c(cfg, out_dir, seed, scale, threads) -> PresetResult:
    b = _Bundle("fig3c", out_dir, cfg, seed, scale)
    schedule = build_schedule(cfg)
    powers = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0]
    n = _trials(20_000_000, scale)
    streams = []
    for i, power in enumerate(powers):
        run_cfg = sweep_config(cfg, "write_power", power)
        streams.append(
            run_trials(
                run_cfg, n, seed=_derived_seed(seed, i), base_cfg=cfg, threads=threads
            )
        )
    # The coincidence window is fixed once, from the brightest run, and then
    # applied to every sweep point; the faint points have too few pairs to
    # locate the peak on their own.
    center = g2_cross(streams[-1], schedule).window_center_ns
    rows = []
    g_values = []
    for power, stream in zip(powers, streams):
        run_cfg = sweep_config(cfg, "write_power", power)
        res = g2_cross(stream, schedule, center_ns=center)
        ro = readout_efficiency(stream, schedule, run_cfg, center_ns=center)
        p_s_crystal = res.p_s / cfg.stokes_transmission
        rows.append(
            (power, res.p_s, p_s_crystal, res.g2, res.sigma, ro.eta_ro, ro.sigma)
        )
        g_values.append(res.g2)
    b.write_csv(
        "fig3c_g2_vs_ps.csv",
        [
            "write_power_uW",
            "p_s_detected",
            "p_s_at_crystal",
            "g2_cross",
            "g2_sigma",
            "eta_ro",
            "eta_ro_sigma",
        ],
        rows,
        {"n_trials_per_point": n},
    )
    peak = int(np.argmax(g_values))
    b.report.update(
        {
            "g2_max": g_values[peak],
            "g2_max_write_power_uW": powers[peak],
            "g2_lowest_power": g_values[0],
            "g2_highest_power": g_values[-1],
        }
    )
    b.band(
        "g2_rises_then_falls",
        0 < peak < len(powers) - 1,
        f"g2 peaks at {powers[peak]} uW (index {peak} of {len(powers) - 1}); "
        f"ends {g_values[0]:.1f} / {g_values[-1]:.1f}, peak {g_values[peak]:.1f}",
    )
    return b.finish()


# --- fig4a: spin decay of the read-out ---------------------------------------


def _preset_fig4a(cfg, out_dir, seed, scale, threads) -> PresetResult:
    b = _Bundle("fig4a", out_dir, cfg, seed, scale)
    cfg_bright = cfg.with_(write_power_uW=64.0)
    storage_us = [2.0, 4.0, 6.0, 8.0, 10.0, 12.0]
    n = _trials(3_000_000, scale)
    rows = []
    ts, etas, sigmas = [], [], []
    for i, t_s in enumerate(storage_us):
        run_cfg = sweep_config(cfg_bright, "storage_time", t_s)
        run_schedule = build_schedule(run_cfg)
        stream = run_trials(
            run_cfg, n, seed=_derived_seed(seed, i), base_cfg=cfg_bright, threads=threads
        )
        ro = readout_efficiency(stream, run_schedule, run_cfg)
        res = g2_cross(stream, run_schedule)
        rows.append((t_s, ro.eta_ro, ro.sigma, res.g2, res.sigma))
        ts.append(t_s)
        etas.append(ro.eta_ro)
        sigmas.append(ro.sigma)
    fit = fit_gaussian_decay(ts, etas, sigma=sigmas)
    b.write_csv(
        "fig4a_decay.csv",
        ["t_s_us", "eta_ro", "eta_ro_sigma", "g2_cross", "g2_sigma"],
        rows,
        {"n_trials_per_point": n, "write_power_uW": cfg_bright.write_power_uW},
    )
    b.report.update(
        {
            "decay_tau_us": fit.tau,
            "decay_tau_sigma_us": fit.tau_sigma,
            "decay_amplitude": fit.amplitude,
            "implied_linewidth_khz": fit.linewidth_khz,
            "implied_linewidth_sigma_khz": fit.linewidth_sigma_khz,
            "configured_linewidth_khz": cfg.spin_linewidth_kHz,
        }
    )
    b.band(
        "decay_tau_band",
        7.5 <= fit.tau <= 9.1,
        f"tau = {fit.tau:.2f} +- {fit.tau_sigma:.2f} us (band [7.5, 9.1])",
    )
    b.band(
        "implied_linewidth_band",
        43.0 <= fit.linewidth_khz <= 47.0,
        f"linewidth = {fit.linewidth_khz:.2f} +- {fit.linewidth_sigma_khz:.2f} kHz "
        "(band [43, 47])",
    )
    return b.finish()


# --- fig4c: temporal multimode tradeoff --------------------------------------


def _preset_fig4c(cfg, out_dir, seed, scale, threads) -> PresetResult:
    b = _Bundle("fig4c", out_dir, cfg, seed, scale)
    cfg_mm = cfg.with_(
        write_power_uW=64.0,
        write_fwhm_ns=500.0,
        stokes_window_us=5.5,
        read_delay_us=15.0,
    )
    schedule = build_schedule(cfg_mm)
    n = _trials(40_000_000, scale)
    stream = run_trials(cfg_mm, n, seed=_derived_seed(seed, 0), threads=threads)
    mm = multimode_analysis(stream, schedule, cfg_mm, delta_tau_ns=500.0)
    b.write_csv(
        "fig4c_multimode.csv",
        [
            "window_us",
            "n_placements",
            "mean_coincidences",
            "coincidences_per_hour",
            "mean_g2",
            "g2_sigma",
        ],
        [
            (
                row.window_ns / 1e3,
                row.n_placements,
                row.mean_coincidences,
                row.coincidences_per_hour,
                row.mean_g2,
                row.g2_sigma,
            )
            for row in mm.rows
        ],
        {"n_trials": n, "write_power_uW": cfg_mm.write_power_uW},
    )
    b.report.update(
        {
            "n_modes": mm.n_modes,
            "delta_tau_ns": mm.delta_tau_ns,
            "counts_pearson_r": mm.counts_pearson_r,
            "g2_slope_per_us": mm.g2_slope_per_us,
            "g2_slope_sigma": mm.g2_slope_sigma,
        }
    )
    b.band("n_modes_11", mm.n_modes == 11, f"N_m = {mm.n_modes} (expected 11)")
    b.band(
        "counts_linear",
        mm.counts_pearson_r > 0.99,
        f"Pearson r = {mm.counts_pearson_r:.5f} (> 0.99)",
    )
    b.band(
        "g2_slope_zero_2sigma",
        mm.slope_consistent_with_zero(2.0),
        f"slope = {mm.g2_slope_per_us:+.3f} +- {mm.g2_slope_sigma:.3f} per us",
    )
    return b.finish()


_PRESETS = {
    "fig2c": _preset_fig2c,
    "fig3b": _preset_fig3b,
    "fig3c": _preset_fig3c,
    "fig4a": _preset_fig4a,
    "fig4c": _preset_fig4c,
}


def run_preset(
    name: str,
    out_dir,
    *,
    config: ExperimentConfig | None = None,
    seed: int | None = None,
    scale: float = 1.0,
    threads: int = 1,
) -> PresetResult:
    if name not in _PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
    cfg = config if config is not None else ExperimentConfig()
    if seed is None:
        seed = cfg.rng_seed
    return _PRESETS[name](cfg, Path(out_dir), seed, scale, threads)
