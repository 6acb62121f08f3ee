from pathlib import Path

import pytest

from afcdlcz_figures import RenderError, render_preset
from afcdlcz_figures.cli import main
from afcdlcz_figures.data import load_csv, load_report
from afcdlcz_figures.render import (
    build_fig3c,
    build_fig4b,
    build_fig4c,
    build_time_histogram,
)
from afcdlcz_figures.style import CLASSICAL_G2_THRESHOLD

ALL_PRESETS = ("fig2c", "fig3b", "fig3c", "fig4a", "fig4c")


@pytest.mark.parametrize("preset", ALL_PRESETS)
def test_preset_renders_png_and_svg(preset, preset_dirs, tmp_path):
    paths = render_preset(preset, preset_dirs[preset], tmp_path / preset)
    assert paths, "no images written"
    exts = {Path(p).suffix for p in paths}
    assert exts == {".png", ".svg"}
    for p in paths:
        assert Path(p).stat().st_size > 1000


@pytest.mark.parametrize("preset", ALL_PRESETS)
def test_rendering_is_byte_stable(preset, preset_dirs, tmp_path):
    first = render_preset(preset, preset_dirs[preset], tmp_path / "a")
    second = render_preset(preset, preset_dirs[preset], tmp_path / "b")
    assert len(first) == len(second)
    for a, b in zip(first, second):
        assert Path(a).read_bytes() == Path(b).read_bytes(), f"{a} differs between runs"


def _has_threshold_line(fig):
    for ax in fig.axes:
        for line in ax.lines:
            ydata = line.get_ydata()
            if len(ydata) == 2 and ydata[0] == ydata[1] == CLASSICAL_G2_THRESHOLD:
                return True
    return False


def test_g2_panels_include_classical_threshold(preset_dirs):
    curve3c = load_csv(
        preset_dirs["fig3c"], "fig3c_g2_vs_ps.csv",
        ["p_s_at_crystal", "g2_cross", "g2_sigma", "eta_ro", "eta_ro_sigma"],
    )
    assert _has_threshold_line(build_fig3c(curve3c))
    decay = load_csv(
        preset_dirs["fig4a"], "fig4a_decay.csv",
        ["t_s_us", "eta_ro", "eta_ro_sigma", "g2_cross", "g2_sigma"],
    )
    assert _has_threshold_line(build_fig4b(decay))
    curve4c = load_csv(
        preset_dirs["fig4c"], "fig4c_multimode.csv",
        ["window_us", "coincidences_per_hour", "mean_g2", "g2_sigma"],
    )
    assert _has_threshold_line(build_fig4c(curve4c))


def test_missing_csv_is_descriptive_and_writes_nothing(tmp_path):
    out = tmp_path / "out"
    with pytest.raises(RenderError, match="missing input CSV"):
        render_preset("fig4c", tmp_path / "empty", out)
    assert not out.exists()


def test_odd_schema_is_descriptive_and_writes_nothing(tmp_path):
    bundle = tmp_path / "bundle"
    bundle.mkdir()
    (bundle / "fig4c_multimode.csv").write_text(
        "# preset=fig4c\nwindow_us,mean_g2\n1.0,20.0\n"
    )
    out = tmp_path / "out"
    with pytest.raises(RenderError, match="missing required columns"):
        render_preset("fig4c", bundle, out)
    assert not out.exists()


def test_unknown_preset_rejected(tmp_path):
    with pytest.raises(RenderError, match="unknown preset"):
        render_preset("fig9z", tmp_path, tmp_path)


def test_empty_histogram_renders_axes_only(tmp_path):
    (tmp_path / "hist.csv").write_text(
        "# preset=fig3b\nbin_start_ns,bin_center_us,counts\n"
    )
    hist = load_csv(tmp_path, "hist.csv", ["bin_center_us", "counts"])
    fig = build_time_histogram(hist, "time (us)")
    assert fig.axes  # axes exist even with no data drawn
    import matplotlib.pyplot as plt

    plt.close(fig)


def test_report_loader_validates(preset_dirs, tmp_path):
    report = load_report(preset_dirs["fig4a"], "fig4a")
    assert "decay_tau_us" in report
    with pytest.raises(RenderError, match="missing report JSON"):
        load_report(tmp_path, "fig4a")


def test_cli_renders_and_reports_errors(preset_dirs, tmp_path, capsys):
    assert main(["fig2c", str(preset_dirs["fig2c"]), str(tmp_path / "cli_out")]) == 0
    out = capsys.readouterr().out
    assert "fig2c_stokes_rate.png" in out
    assert main(["fig2c", str(tmp_path / "nothing"), str(tmp_path / "cli_out2")]) == 2
