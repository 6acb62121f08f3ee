"""Per-preset panel renderers.

Each ``build_*`` function turns already-parsed CSV data into a matplotlib
figure; each ``render_*`` function validates all inputs first, then writes
every panel as PNG and SVG into the output directory.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .data import RenderError, load_csv, load_report
from .style import ACCENT, NEUTRAL, SECONDARY, add_threshold_line, new_figure, save_figure

__all__ = ["PRESETS", "RenderError", "render_preset"]


def _errorbar(ax, x, y, yerr, color, label=None):
    ax.errorbar(
        x, y, yerr=yerr, fmt="s", color=color, markersize=5,
        capsize=2.5, linewidth=1.0, label=label,
    )


def _step_histogram(ax, centers_us, counts, color):
    if len(centers_us):
        ax.step(centers_us, counts, where="mid", color=color, linewidth=1.2)
    ax.set_ylim(bottom=0)


# --- fig2c -------------------------------------------------------------------


def build_fig2c(rate, report):
    fig, ax = new_figure()
    _errorbar(ax, rate["write_power_uW"], rate["p_s_detected"], rate["p_s_sigma"], ACCENT)
    slope = report.get("slope_per_uW")
    intercept = report.get("intercept")
    if slope is not None and len(rate["write_power_uW"]):
        grid = np.linspace(0.0, float(rate["write_power_uW"].max()) * 1.05, 100)
        ax.plot(grid, slope * grid + intercept, color=NEUTRAL, linewidth=1.0,
                label="linear fit")
        ax.legend(loc="upper left")
    ax.set_xlabel("write power (uW)")
    ax.set_ylabel("Stokes detection probability per trial")
    ax.set_xlim(left=0)
    ax.set_ylim(bottom=0)
    return fig


def render_fig2c(csv_dir, out_dir) -> list:
    rate = load_csv(csv_dir, "fig2c_stokes_rate.csv",
                    ["write_power_uW", "p_s_detected", "p_s_sigma"])
    report = load_report(csv_dir, "fig2c")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return save_figure(build_fig2c(rate, report), out / "fig2c_stokes_rate")


# --- fig3b -------------------------------------------------------------------


def build_time_histogram(hist, xlabel, color=SECONDARY, title=None):
    fig, ax = new_figure()
    _step_histogram(ax, hist["bin_center_us"], hist[_count_col(hist)], color)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("counts per bin")
    if title:
        ax.set_title(title)
    return fig


def _count_col(hist):
    return "coincidences" if "coincidences" in hist else "counts"


def build_offsets_bars(offsets):
    fig, ax = new_figure()
    k = offsets["trial_offset"]
    if len(k):
        ax.bar(k, offsets["coincidences_per_hour"], width=0.8, color=ACCENT)
    ax.set_xlabel("trial separation (multiples of the trial period)")
    ax.set_ylabel("coincidences per hour")
    return fig


def render_fig3b(csv_dir, out_dir) -> list:
    hist_cols = ["bin_start_ns", "bin_center_us"]
    sum_hist = load_csv(csv_dir, "fig3b_sum_histogram.csv", hist_cols + ["coincidences"])
    s_hist = load_csv(csv_dir, "fig3b_stokes_histogram.csv", hist_cols + ["counts"])
    a_hist = load_csv(csv_dir, "fig3b_antistokes_histogram.csv", hist_cols + ["counts"])
    offsets = load_csv(
        csv_dir, "fig3b_offsets.csv",
        ["trial_offset", "coincidences", "coincidences_per_hour"],
    )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    paths += save_figure(
        build_time_histogram(s_hist, "Stokes detection time after write (us)"),
        out / "fig3b_stokes_histogram",
    )
    paths += save_figure(
        build_time_histogram(a_hist, "anti-Stokes detection time after read (us)"),
        out / "fig3b_antistokes_histogram",
    )
    paths += save_figure(
        build_time_histogram(sum_hist, "T_s + T_as (us)", color=ACCENT),
        out / "fig3b_sum_histogram",
    )
    paths += save_figure(build_offsets_bars(offsets), out / "fig3b_offsets")
    return paths


# --- fig3c -------------------------------------------------------------------


def build_fig3c(curve):
    fig, ax = new_figure(right_axis=True)
    x = curve["p_s_at_crystal"]
    _errorbar(ax, x, curve["g2_cross"], curve["g2_sigma"], ACCENT, label="g2 cross")
    add_threshold_line(ax)
    ax.set_xscale("log")
    ax.set_xlabel("Stokes creation probability at the crystal")
    ax.set_ylabel("g2 cross-correlation")
    ax.set_ylim(bottom=0)
    ax2 = ax.twinx()
    _errorbar(ax2, x, curve["eta_ro"], curve["eta_ro_sigma"], SECONDARY, label="read-out eff.")
    ax2.set_ylabel("read-out efficiency")
    ax2.set_ylim(bottom=0)
    handles, labels = ax.get_legend_handles_labels()
    h2, l2 = ax2.get_legend_handles_labels()
    ax.legend(handles + h2, labels + l2, loc="upper right")
    return fig


def render_fig3c(csv_dir, out_dir) -> list:
    curve = load_csv(
        csv_dir, "fig3c_g2_vs_ps.csv",
        ["write_power_uW", "p_s_detected", "p_s_at_crystal",
         "g2_cross", "g2_sigma", "eta_ro", "eta_ro_sigma"],
    )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return save_figure(build_fig3c(curve), out / "fig3c_g2_vs_ps")


# --- fig4a / fig4b -----------------------------------------------------------


def build_fig4a(decay, report):
    fig, ax = new_figure()
    _errorbar(ax, decay["t_s_us"], decay["eta_ro"], decay["eta_ro_sigma"], SECONDARY)
    tau = report.get("decay_tau_us")
    amplitude = report.get("decay_amplitude")
    if tau and amplitude and len(decay["t_s_us"]):
        grid = np.linspace(0.0, float(decay["t_s_us"].max()) * 1.05, 200)
        ax.plot(
            grid, amplitude * np.exp(-((grid / tau) ** 2)),
            color=ACCENT, linewidth=1.2,
            label=f"Gaussian decay fit, 1/e time {tau:.1f} us",
        )
        ax.legend(loc="upper right")
    ax.set_xlabel("spin storage time (us)")
    ax.set_ylabel("read-out efficiency")
    ax.set_ylim(bottom=0)
    return fig


def build_fig4b(decay):
    fig, ax = new_figure()
    _errorbar(ax, decay["t_s_us"], decay["g2_cross"], decay["g2_sigma"], ACCENT)
    add_threshold_line(ax)
    ax.set_xlabel("spin storage time (us)")
    ax.set_ylabel("g2 cross-correlation")
    ax.set_ylim(bottom=0)
    ax.legend(loc="upper right")
    return fig


def render_fig4a(csv_dir, out_dir) -> list:
    decay = load_csv(
        csv_dir, "fig4a_decay.csv",
        ["t_s_us", "eta_ro", "eta_ro_sigma", "g2_cross", "g2_sigma"],
    )
    report = load_report(csv_dir, "fig4a")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = save_figure(build_fig4a(decay, report), out / "fig4a_decay")
    paths += save_figure(build_fig4b(decay), out / "fig4b_g2_vs_storage")
    return paths


# --- fig4c -------------------------------------------------------------------


def build_fig4c(curve):
    fig, ax = new_figure(right_axis=True)
    x = curve["window_us"]
    ax.plot(x, curve["coincidences_per_hour"], "o-", color=SECONDARY,
            markersize=5, linewidth=1.0, label="coincidences per hour")
    ax.set_xlabel("Stokes window size (us)")
    ax.set_ylabel("coincidences per hour")
    ax.set_ylim(bottom=0)
    ax2 = ax.twinx()
    _errorbar(ax2, x, curve["mean_g2"], curve["g2_sigma"], ACCENT, label="g2 cross")
    add_threshold_line(ax2)
    ax2.set_ylabel("g2 cross-correlation")
    ax2.set_ylim(bottom=0)
    handles, labels = ax.get_legend_handles_labels()
    h2, l2 = ax2.get_legend_handles_labels()
    ax.legend(handles + h2, labels + l2, loc="center right")
    return fig


def render_fig4c(csv_dir, out_dir) -> list:
    curve = load_csv(
        csv_dir, "fig4c_multimode.csv",
        ["window_us", "n_placements", "mean_coincidences",
         "coincidences_per_hour", "mean_g2", "g2_sigma"],
    )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return save_figure(build_fig4c(curve), out / "fig4c_multimode")


PRESETS = {
    "fig2c": render_fig2c,
    "fig3b": render_fig3b,
    "fig3c": render_fig3c,
    "fig4a": render_fig4a,
    "fig4c": render_fig4c,
}


def render_preset(preset: str, csv_dir, out_dir) -> list:
    """Render every panel for one preset; returns the written image paths."""
    if preset not in PRESETS:
        raise RenderError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
    return PRESETS[preset](csv_dir, out_dir)
