"""Streaming estimators turning event streams into the report quantities:
coincidence histograms, cross/auto g2 with cross-trial accidental
normalization, the Cauchy-Schwarz ratio, read-out efficiency, decay and
multimode curves.

Coincidences live on the sum T_s + T_as, where T_s is the Stokes detection
time after the write pulse and T_as the anti-Stokes detection time after the
read pulse; correlated pairs pile up at the comb rephasing delay.  All g2
estimators divide same-trial coincidences by the mean of cross-trial
coincidences taken at the configured trial offsets, with Poisson error
propagation on both counts.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .config import (
    CHANNEL_ANTISTOKES,
    CHANNEL_STOKES,
    ExperimentConfig,
    TrialSchedule,
)
from .events import EventStream
from .fitting import FitError, fit_gaussian_peak, fit_linear, pearson_r

__all__ = [
    "AnalysisError",
    "G2Result",
    "HistogramResult",
    "TimingMetrics",
    "ReadoutEfficiency",
    "MultimodeRow",
    "MultimodeResult",
    "CorrelationReport",
    "DEFAULT_OFFSETS",
    "coincidence_histogram",
    "g2_cross",
    "g2_auto",
    "readout_efficiency",
    "cauchy_schwarz_r",
    "multimode_analysis",
    "timing_metrics",
]

DEFAULT_OFFSETS = (-5, -4, -3, -2, -1, 1, 2, 3, 4, 5)
_PEAK_REGION_NS = 2000  # half-width of the region treated as "the peak"


class AnalysisError(ValueError):
    """Raised for inputs on which an estimator is undefined."""


# --- low-level pairing machinery -------------------------------------------


def _require_sorted(stream: EventStream) -> None:
    if not stream.is_sorted():
        raise AnalysisError("event stream must be sorted by (trial_id, t_ns)")


def _channel_arrays(stream: EventStream, channel: int):
    m = stream.channel == channel
    return stream.trial_id[m], stream.t_ns[m], stream.detector_id[m]


def _pair_indices(s_trial, a_trial, trial_offset: int = 0):
    """Index pairs (Stokes row, anti-Stokes row) joining trial i to trial
    i + offset.  Zero offset gives the same-trial pairs."""
    target = s_trial + trial_offset
    lo = np.searchsorted(a_trial, target, "left")
    hi = np.searchsorted(a_trial, target, "right")
    reps = hi - lo
    total = int(reps.sum())
    if total == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    s_idx = np.repeat(np.arange(len(s_trial)), reps)
    group_start = np.concatenate(([0], np.cumsum(reps)[:-1]))
    within = np.arange(total) - np.repeat(group_start, reps)
    a_idx = np.repeat(lo, reps) + within
    return s_idx, a_idx


def _pair_sums(s_trial, s_t, a_trial, a_t, read_t_ns: int, trial_offset: int = 0):
    """T_s + T_as for every (Stokes, anti-Stokes) pairing across a fixed
    trial offset."""
    s_idx, a_idx = _pair_indices(s_trial, a_trial, trial_offset)
    return s_t[s_idx] + a_t[a_idx] - read_t_ns


def _peak_center(sums: np.ndarray, bin_ns: int) -> float:
    """Window center estimate: the peak histogram bin, refined by the mean
    of the pair sums around it so the result is not quantized to the bin
    grid (the nominal peak routinely falls on a bin edge)."""
    if len(sums) == 0:
        raise AnalysisError("no same-trial coincidences; cannot locate the peak")
    idx = np.bincount((sums // bin_ns).astype(np.int64)).argmax()
    coarse = (idx + 0.5) * bin_ns
    near = sums[np.abs(sums - coarse) <= _PEAK_REGION_NS]
    return float(near.mean()) if len(near) else coarse


def _window_counts(sums: np.ndarray, center: float, window_ns: float | None) -> int:
    if window_ns is None:
        return len(sums)
    half = window_ns / 2.0
    return int(np.count_nonzero((sums >= center - half) & (sums < center + half)))


@dataclass(frozen=True)
class G2Result:
    g2: float
    sigma: float
    same_counts: int
    accidental_counts: int
    accidental_per_trial: float
    p_s: float
    p_as: float
    window_center_ns: float | None
    window_ns: float | None
    bin_ns: int
    n_trials: int

    @property
    def p_coinc(self) -> float:
        return self.same_counts / self.n_trials


def _g2_from_counts(
    same: int, acc_counts: list[int], acc_slots: list[int], n_trials: int
) -> tuple[float, float, float]:
    total_acc = int(sum(acc_counts))
    if total_acc == 0:
        raise AnalysisError(
            "zero cross-trial (accidental) coincidences: g2 is undefined; "
            "increase the number of trials or the offset list"
        )
    p_acc = float(np.mean([c / s for c, s in zip(acc_counts, acc_slots)]))
    g2 = (same / n_trials) / p_acc
    sigma = g2 * math.sqrt((1.0 / same if same > 0 else 0.0) + 1.0 / total_acc)
    return g2, sigma, p_acc


def g2_cross(
    stream: EventStream,
    schedule: TrialSchedule,
    *,
    bin_ns: int = 400,
    window_ns: float | None = 1000.0,
    center_ns: float | None = None,
    offsets: tuple[int, ...] = DEFAULT_OFFSETS,
) -> G2Result:
    """Stokes / anti-Stokes cross-correlation in a window on T_s + T_as.

    The window defaults to being centered on the histogram's peak bin, which
    makes the estimator tolerant to configured timing offsets.  Pass
    ``window_ns=None`` to count every same-trial pairing (used for the exact
    single-mode oracle comparisons).
    """
    _require_sorted(stream)
    if not offsets:
        raise AnalysisError("offset list must not be empty")
    if any(k == 0 for k in offsets):
        raise AnalysisError("trial offsets must be nonzero")
    s_trial, s_t, _ = _channel_arrays(stream, CHANNEL_STOKES)
    a_trial, a_t, _ = _channel_arrays(stream, CHANNEL_ANTISTOKES)
    n = stream.n_trials

    same_sums = _pair_sums(s_trial, s_t, a_trial, a_t, schedule.read_t_ns)
    if window_ns is not None and center_ns is None:
        center_ns = _peak_center(same_sums, bin_ns)
    same = _window_counts(same_sums, center_ns or 0.0, window_ns)

    acc_counts = []
    acc_slots = []
    for k in offsets:
        sums_k = _pair_sums(s_trial, s_t, a_trial, a_t, schedule.read_t_ns, k)
        acc_counts.append(_window_counts(sums_k, center_ns or 0.0, window_ns))
        acc_slots.append(n - abs(k))
    g2, sigma, p_acc = _g2_from_counts(same, acc_counts, acc_slots, n)
    return G2Result(
        g2=g2,
        sigma=sigma,
        same_counts=same,
        accidental_counts=int(sum(acc_counts)),
        accidental_per_trial=p_acc,
        p_s=len(s_trial) / n,
        p_as=len(a_trial) / n,
        window_center_ns=center_ns,
        window_ns=window_ns,
        bin_ns=bin_ns,
        n_trials=n,
    )


def g2_auto(
    stream: EventStream,
    schedule: TrialSchedule,
    channel: int,
    *,
    delta_tau_ns: float = 1000.0,
    region: tuple[int, int] | None = None,
    offsets: tuple[int, ...] = DEFAULT_OFFSETS,
) -> G2Result:
    """Auto-correlation from a 50/50 split channel watched by two detectors.

    A coincidence is a same-trial pair of clicks, one per detector, falling
    in the same ``delta_tau_ns``-wide time bin of the analysis region.  The
    region defaults to the channel's temporal-mode span: the Stokes gate, or
    its rephased mirror image for the anti-Stokes channel.
    """
    _require_sorted(stream)
    trial, t, det = _channel_arrays(stream, channel)
    if len(trial) == 0:
        raise AnalysisError("no events on the requested channel")
    if np.all(det == det[0]):
        raise AnalysisError(
            "auto-correlation requires clicks on two detectors; "
            "simulate with the matching splitter"
        )
    if region is None:
        region = (
            schedule.stokes_gate
            if channel == CHANNEL_STOKES
            else schedule.rephasing_region
        )
    span = region[1] - region[0]
    if delta_tau_ns <= 0 or delta_tau_ns > span:
        raise AnalysisError(f"delta_tau {delta_tau_ns} ns outside (0, {span}] ns")
    n_bins = int(math.ceil(span / delta_tau_ns))

    keys = []
    for det_id in (0, 1):
        m = (det == det_id) & (t >= region[0]) & (t < region[1])
        bin_idx = ((t[m] - region[0]) // int(delta_tau_ns)).astype(np.int64)
        keys.append(trial[m] * n_bins + bin_idx)
    k0, k1 = keys
    n = stream.n_trials
    same = len(np.intersect1d(k0, k1, assume_unique=True))
    acc_counts = []
    acc_slots = []
    for k in offsets:
        acc_counts.append(
            len(np.intersect1d(k0 + k * n_bins, k1, assume_unique=True))
        )
        acc_slots.append(n - abs(k))
    g2, sigma, p_acc = _g2_from_counts(same, acc_counts, acc_slots, n)
    return G2Result(
        g2=g2,
        sigma=sigma,
        same_counts=same,
        accidental_counts=int(sum(acc_counts)),
        accidental_per_trial=p_acc,
        p_s=len(k0) / n,
        p_as=len(k1) / n,
        window_center_ns=None,
        window_ns=delta_tau_ns,
        bin_ns=int(delta_tau_ns),
        n_trials=n,
    )


# --- histograms and timing metrics ------------------------------------------


@dataclass(frozen=True)
class HistogramResult:
    bin_ns: int
    sum_edges_ns: np.ndarray
    sum_counts: np.ndarray
    stokes_edges_ns: np.ndarray
    stokes_counts: np.ndarray
    antistokes_edges_ns: np.ndarray
    antistokes_counts: np.ndarray
    n_pairs: int
    n_stokes: int
    n_antistokes: int


def _binned(values: np.ndarray, lo: int, hi: int, bin_ns: int):
    edges = np.arange(lo, hi + bin_ns, bin_ns, dtype=np.int64)
    counts, _ = np.histogram(values, bins=edges)
    return edges, counts


def coincidence_histogram(
    stream: EventStream, schedule: TrialSchedule, *, bin_ns: int = 400
) -> HistogramResult:
    """Histogram of T_s + T_as over same-trial pairs, plus the per-channel
    time histograms (Stokes time after write, anti-Stokes time after read)."""
    _require_sorted(stream)
    if bin_ns <= 0:
        raise AnalysisError(f"bin_ns must be > 0, got {bin_ns}")
    s_trial, s_t, _ = _channel_arrays(stream, CHANNEL_STOKES)
    a_trial, a_t, _ = _channel_arrays(stream, CHANNEL_ANTISTOKES)
    sums = _pair_sums(s_trial, s_t, a_trial, a_t, schedule.read_t_ns)

    sum_max = schedule.stokes_gate[1] + (
        schedule.antistokes_gate[1] - schedule.read_t_ns
    )
    sum_edges, sum_counts = _binned(sums, 0, int(sum_max), bin_ns)
    s_edges, s_counts = _binned(
        s_t, schedule.stokes_gate[0], schedule.stokes_gate[1], bin_ns
    )
    a_rel = a_t - schedule.read_t_ns
    a_edges, a_counts = _binned(
        a_rel,
        schedule.antistokes_gate[0] - schedule.read_t_ns,
        schedule.antistokes_gate[1] - schedule.read_t_ns,
        bin_ns,
    )
    return HistogramResult(
        bin_ns=bin_ns,
        sum_edges_ns=sum_edges,
        sum_counts=sum_counts,
        stokes_edges_ns=s_edges,
        stokes_counts=s_counts,
        antistokes_edges_ns=a_edges,
        antistokes_counts=a_counts,
        n_pairs=len(sums),
        n_stokes=len(s_t),
        n_antistokes=len(a_t),
    )


@dataclass(frozen=True)
class TimingMetrics:
    centroid_ns: float
    fwhm_ns: float
    beta_g: float
    window_center_ns: float
    window_ns: float
    peak_counts: float


def timing_metrics(
    stream: EventStream,
    schedule: TrialSchedule,
    *,
    bin_ns: int = 400,
    window_ns: float = 1000.0,
    offsets: tuple[int, ...] = DEFAULT_OFFSETS,
) -> TimingMetrics:
    """Accidental-subtracted shape of the coincidence peak.

    Returns the centroid, the Gaussian-fit FWHM over the peak region, and
    the fraction of net peak counts inside the analysis window (the window
    acceptance factor of the efficiency budget).  The centroid and window
    fraction work on the raw pair sums so they are not quantized by the
    histogram grid; only the shape fit uses the binned histogram.
    """
    _require_sorted(stream)
    s_trial, s_t, _ = _channel_arrays(stream, CHANNEL_STOKES)
    a_trial, a_t, _ = _channel_arrays(stream, CHANNEL_ANTISTOKES)
    n = stream.n_trials
    sums = _pair_sums(s_trial, s_t, a_trial, a_t, schedule.read_t_ns)
    center = _peak_center(sums, bin_ns)
    acc_sums = [
        _pair_sums(s_trial, s_t, a_trial, a_t, schedule.read_t_ns, k) for k in offsets
    ]
    acc_scale = [n / (n - abs(k)) for k in offsets]

    def net_stat(lo: float, hi: float) -> tuple[float, float]:
        m = (sums >= lo) & (sums < hi)
        count = float(m.sum())
        first_moment = float(sums[m].sum())
        for sums_k, scale in zip(acc_sums, acc_scale):
            mk = (sums_k >= lo) & (sums_k < hi)
            count -= scale * float(mk.sum()) / len(offsets)
            first_moment -= scale * float(sums_k[mk].sum()) / len(offsets)
        return count, first_moment

    region_count, region_moment = net_stat(
        center - _PEAK_REGION_NS, center + _PEAK_REGION_NS
    )
    if region_count <= 0:
        raise AnalysisError("no net coincidence peak above accidentals")
    centroid = region_moment / region_count
    window_count, _ = net_stat(center - window_ns / 2.0, center + window_ns / 2.0)
    beta_g = min(max(window_count / region_count, 0.0), 1.0)

    sum_max = int(
        schedule.stokes_gate[1] + schedule.antistokes_gate[1] - schedule.read_t_ns
    )
    edges, same_counts = _binned(sums, 0, sum_max, bin_ns)
    acc_hist = np.zeros(len(same_counts), dtype=float)
    for sums_k, scale in zip(acc_sums, acc_scale):
        _, counts_k = _binned(sums_k, 0, sum_max, bin_ns)
        acc_hist += counts_k * scale / len(offsets)
    net = same_counts - acc_hist
    centers = (edges[:-1] + edges[1:]) / 2.0
    region = np.abs(centers - center) <= _PEAK_REGION_NS
    try:
        fit = fit_gaussian_peak(centers[region], net[region])
        fwhm = fit.fwhm
    except FitError as exc:
        raise AnalysisError(f"peak shape fit failed: {exc}") from exc

    return TimingMetrics(
        centroid_ns=centroid,
        fwhm_ns=float(fwhm),
        beta_g=beta_g,
        window_center_ns=center,
        window_ns=window_ns,
        peak_counts=region_count,
    )


# --- read-out efficiency -----------------------------------------------------


@dataclass(frozen=True)
class ReadoutEfficiency:
    eta_ro: float
    sigma: float
    eta_ro_detected: float
    sigma_detected: float
    p_s: float
    p_coinc: float
    p_coinc_accidental: float


def readout_efficiency(
    stream: EventStream,
    schedule: TrialSchedule,
    config: ExperimentConfig,
    *,
    bin_ns: int = 400,
    window_ns: float = 1000.0,
    center_ns: float | None = None,
    offsets: tuple[int, ...] = DEFAULT_OFFSETS,
) -> ReadoutEfficiency:
    """Accidental-subtracted coincidence probability per Stokes herald.

    ``eta_ro_detected`` uses raw detected probabilities; ``eta_ro`` removes
    the anti-Stokes arm transmission so the value refers to the crystal
    output, which is how the protocol's retrieval efficiency is quoted.
    """
    res = g2_cross(
        stream,
        schedule,
        bin_ns=bin_ns,
        window_ns=window_ns,
        center_ns=center_ns,
        offsets=offsets,
    )
    if res.p_s <= 0:
        raise AnalysisError("no Stokes events: read-out efficiency undefined")
    net = res.p_coinc - res.accidental_per_trial
    sigma_net = math.sqrt(
        res.same_counts / res.n_trials**2
        + (res.accidental_per_trial / res.accidental_counts if res.accidental_counts else 0.0)
        * res.accidental_per_trial
    )
    detected = net / res.p_s
    sigma_detected = sigma_net / res.p_s
    eta_t = config.antistokes_transmission
    if eta_t <= 0:
        raise AnalysisError("antistokes_transmission must be > 0 to back-propagate")
    return ReadoutEfficiency(
        eta_ro=detected / eta_t,
        sigma=sigma_detected / eta_t,
        eta_ro_detected=detected,
        sigma_detected=sigma_detected,
        p_s=res.p_s,
        p_coinc=res.p_coinc,
        p_coinc_accidental=res.accidental_per_trial,
    )


# --- Cauchy-Schwarz ----------------------------------------------------------


def cauchy_schwarz_r(
    g2_cross_value: float,
    g2_ss: float,
    g2_asas: float,
    *,
    sigma_cross: float = 0.0,
    sigma_ss: float = 0.0,
    sigma_asas: float = 0.0,
) -> tuple[float, float]:
    """R = g2_cross^2 / (g2_ss * g2_asas) with first-order error propagation.

    Classical fields obey R <= 1; violating it certifies nonclassical
    Stokes / anti-Stokes correlations.
    """
    for name, value in (
        ("g2_cross", g2_cross_value),
        ("g2_ss", g2_ss),
        ("g2_asas", g2_asas),
    ):
        if value <= 0:
            raise AnalysisError(f"{name} must be > 0, got {value!r}")
    r = g2_cross_value**2 / (g2_ss * g2_asas)
    rel = math.sqrt(
        (2.0 * sigma_cross / g2_cross_value) ** 2
        + (sigma_ss / g2_ss) ** 2
        + (sigma_asas / g2_asas) ** 2
    )
    return r, r * rel


# --- temporal multimode analysis ---------------------------------------------


@dataclass(frozen=True)
class MultimodeRow:
    window_ns: float
    n_placements: int
    mean_coincidences: float
    coincidences_per_hour: float
    mean_g2: float
    g2_sigma: float


@dataclass(frozen=True)
class MultimodeResult:
    n_modes: int
    delta_tau_ns: float
    total_window_ns: float
    rows: list[MultimodeRow]
    counts_pearson_r: float
    g2_slope_per_us: float
    g2_slope_sigma: float

    def slope_consistent_with_zero(self, n_sigma: float = 2.0) -> bool:
        return abs(self.g2_slope_per_us) <= n_sigma * self.g2_slope_sigma


def multimode_analysis(
    stream: EventStream,
    schedule: TrialSchedule,
    config: ExperimentConfig,
    *,
    delta_tau_ns: float,
    total_window_ns: float | None = None,
    bin_ns: int = 400,
    coincidence_window_ns: float | None = None,
    offsets: tuple[int, ...] = DEFAULT_OFFSETS,
) -> MultimodeResult:
    """Stokes-window sweep: for every window size (multiples of delta_tau)
    average the coincidence count and g2 over all window placements.

    The mode capacity is floor(total_window / delta_tau).  Counts are also
    expressed per hour of wall time from the trial period (unit duty cycle
    assumed; preparation overhead is not modeled).
    """
    _require_sorted(stream)
    gate_lo, gate_hi = schedule.stokes_gate
    if total_window_ns is None:
        total_window_ns = gate_hi - gate_lo
    if delta_tau_ns <= 0 or delta_tau_ns > total_window_ns:
        raise AnalysisError(
            f"delta_tau {delta_tau_ns} ns outside (0, {total_window_ns}] ns"
        )
    if coincidence_window_ns is None:
        coincidence_window_ns = delta_tau_ns
    n_modes = int(total_window_ns // delta_tau_ns)

    s_trial, s_t, _ = _channel_arrays(stream, CHANNEL_STOKES)
    a_trial, a_t, _ = _channel_arrays(stream, CHANNEL_ANTISTOKES)
    n = stream.n_trials
    all_sums = _pair_sums(s_trial, s_t, a_trial, a_t, schedule.read_t_ns)
    center = _peak_center(all_sums, bin_ns)
    s_bin = np.clip(
        ((s_t - gate_lo) // int(delta_tau_ns)).astype(np.int64), 0, n_modes - 1
    )

    # One pass per trial offset: count in-window coincidences per Stokes
    # bin, then every (window size, placement) reduces to a partial sum.
    half = coincidence_window_ns / 2.0

    def per_bin_window_counts(offset: int) -> np.ndarray:
        s_idx, a_idx = _pair_indices(s_trial, a_trial, offset)
        sums = s_t[s_idx] + a_t[a_idx] - schedule.read_t_ns
        m = (sums >= center - half) & (sums < center + half)
        return np.bincount(s_bin[s_idx[m]], minlength=n_modes).astype(float)

    same_by_bin = per_bin_window_counts(0)
    acc_by_bin = np.zeros((len(offsets), n_modes))
    for i, k in enumerate(offsets):
        acc_by_bin[i] = per_bin_window_counts(k)
    slots = np.array([n - abs(k) for k in offsets], dtype=float)

    trials_per_hour = 3600.0 / (config.trial_period_us * 1e-6) / n

    rows: list[MultimodeRow] = []
    for k in range(1, n_modes + 1):
        size_counts = []
        size_g2 = []
        size_var = []
        for j in range(0, n_modes - k + 1):
            same = int(same_by_bin[j : j + k].sum())
            acc_counts = acc_by_bin[:, j : j + k].sum(axis=1)
            total_acc = float(acc_counts.sum())
            if total_acc == 0:
                raise AnalysisError(
                    f"zero accidentals in window size {k * delta_tau_ns} ns at "
                    f"placement {j}; increase trials"
                )
            p_acc = float(np.mean(acc_counts / slots))
            g2 = (same / n) / p_acc
            var = g2**2 * ((1.0 / same if same else 0.0) + 1.0 / total_acc)
            size_counts.append(same)
            size_g2.append(g2)
            size_var.append(var)
        placements = len(size_counts)
        mean_counts = float(np.mean(size_counts))
        mean_g2 = float(np.mean(size_g2))
        g2_sigma = math.sqrt(float(np.sum(size_var))) / placements
        rows.append(
            MultimodeRow(
                window_ns=k * delta_tau_ns,
                n_placements=placements,
                mean_coincidences=mean_counts,
                coincidences_per_hour=mean_counts * trials_per_hour,
                mean_g2=mean_g2,
                g2_sigma=g2_sigma,
            )
        )

    sizes_us = [row.window_ns / 1e3 for row in rows]
    counts = [row.mean_coincidences for row in rows]
    if len(rows) >= 2:
        r = pearson_r(sizes_us, counts)
        fit = fit_linear(
            sizes_us, [row.mean_g2 for row in rows], sigma=[row.g2_sigma for row in rows]
        )
        slope, slope_sigma = fit.slope, fit.slope_sigma
    else:
        # a single window carries no trend information
        r = 1.0
        slope, slope_sigma = 0.0, math.inf
    return MultimodeResult(
        n_modes=n_modes,
        delta_tau_ns=delta_tau_ns,
        total_window_ns=float(total_window_ns),
        rows=rows,
        counts_pearson_r=r,
        g2_slope_per_us=slope,
        g2_slope_sigma=slope_sigma,
    )


# --- report container --------------------------------------------------------


@dataclass(frozen=True)
class CorrelationReport:
    """g2 values with uncertainties plus the probabilities behind them."""

    g2_cross: float
    g2_cross_sigma: float
    p_s: float
    p_as: float
    p_coinc: float
    p_coinc_accidental: float
    eta_ro: float
    eta_ro_sigma: float
    n_trials: int
    bin_ns: int
    window_ns: float
    g2_ss: float | None = None
    g2_ss_sigma: float | None = None
    g2_asas: float | None = None
    g2_asas_sigma: float | None = None
    r_cs: float | None = None
    r_cs_sigma: float | None = None

    def check(self) -> list[str]:
        problems = []
        for name in ("p_s", "p_as", "p_coinc", "p_coinc_accidental"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                problems.append(f"{name} out of [0,1]: {value}")
        for name in ("g2_cross_sigma", "eta_ro_sigma", "g2_ss_sigma", "g2_asas_sigma", "r_cs_sigma"):
            value = getattr(self, name)
            if value is not None and value < 0:
                problems.append(f"{name} negative: {value}")
        have_autos = self.g2_ss is not None and self.g2_asas is not None
        if (self.r_cs is not None) != have_autos:
            problems.append("r_cs must be present exactly when both autocorrelations are")
        return problems

    def to_text(self) -> str:
        lines = []
        for key, value in asdict(self).items():
            if value is None:
                continue
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {k: v for k, v in asdict(self).items() if v is not None},
            indent=2,
            sort_keys=True,
        )
