"""Fixed plot style and deterministic file output.

SVG ids are salted with a constant and the date metadata is stripped, so a
given set of CSVs always renders to the same bytes.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

ACCENT = "#b3443c"
SECONDARY = "#2b5f8a"
NEUTRAL = "#666666"
THRESHOLD_COLOR = "#222222"

# classical bound for the cross-correlation of two thermal-statistics beams
CLASSICAL_G2_THRESHOLD = 2.0

_RC = {
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "font.size": 11,
    "axes.titlesize": 11,
    "axes.labelsize": 11,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.frameon": False,
    "svg.hashsalt": "afcdlcz-figures",
    "path.simplify": False,
}


def new_figure(right_axis: bool = False):
    plt.rcdefaults()
    plt.rcParams.update(_RC)
    if right_axis:
        plt.rcParams["axes.spines.right"] = True
    fig, ax = plt.subplots()
    return fig, ax


def add_threshold_line(ax, label: str = "classical threshold"):
    ax.axhline(
        CLASSICAL_G2_THRESHOLD,
        color=THRESHOLD_COLOR,
        linestyle="--",
        linewidth=1.0,
        label=label,
        zorder=1,
    )


def save_figure(fig, out_base) -> list:
    """Write PNG and SVG next to each other; returns the written paths."""
    paths = []
    for ext, metadata in (("png", {"Software": None}), ("svg", {"Date": None})):
        path = f"{out_base}.{ext}"
        fig.savefig(path, metadata=metadata, bbox_inches="tight")
        paths.append(path)
    plt.close(fig)
    return paths
