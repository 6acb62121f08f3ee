"""Monte-Carlo generation of detection-event streams.

Emission model, per trial and per temporal mode: the pair number follows a
thermal distribution (two-mode squeezed vacuum marginal) with the per-mode
mean chosen so that the detected Stokes probability equals the configured
slope * write power.  Every Stokes photon is thinned by the Stokes arm
transmission; each stored excitation is retrieved with probability
eta_RP * eta_reph * beta_BR * exp(-(t_S/tau)^2) and the retrieved photon is
thinned by the anti-Stokes transmission.  Retrieved photons re-emerge at
T_as = tau_AFC - T_s plus a Gaussian pair jitter sized so the coincidence
peak has the configured width; the rephasing law holds exactly before
jitter.

Noise channels: gated Poisson dark counts per detector, thermal uncorrelated
background co-located with each channel's temporal modes, and a Gaussian
echo-leak pulse in the anti-Stokes gate.  Background and echo magnitudes are
calibrated once from the config's nominal operating point and then held
fixed, so sweeps over write power or storage time see an absolute noise
floor.

Randomness: counter-based Philox substreams keyed by (master seed, block
index) over fixed blocks of 2^20 trials, so serial and sharded runs produce
bit-identical streams.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .config import (
    CHANNEL_ANTISTOKES,
    CHANNEL_STOKES,
    ExperimentConfig,
    TrialSchedule,
    build_schedule,
    config_hash,
    validate,
)
from .events import EventStream
from .memory import linewidth_khz_to_tau_us

__all__ = [
    "GenerationParams",
    "SimulationError",
    "calibrate",
    "run_trials",
    "run_sweep",
    "SWEEP_AXES",
    "PAIR_JITTER_FWHM_FRACTION",
]

BLOCK_TRIALS = 1 << 20
_GAUSS_FWHM = 2.0 * math.sqrt(2.0 * math.log(2.0))
# Pair-sum jitter as a fraction of the write FWHM; 940 ns at the 1 us default.
PAIR_JITTER_FWHM_FRACTION = 0.94
# Below this occupancy probability the per-trial draws are position-sampled.
_SPARSE_Q = 0.05

SWEEP_AXES = ("write_power", "storage_time", "window_T")

_STREAM_RUN = 0
_STREAM_SWEEP = 1


class SimulationError(ValueError):
    """Raised when a simulation is requested with an invalid setup."""


@dataclass(frozen=True)
class GenerationParams:
    """Fully resolved sampling parameters for one run."""

    schedule: TrialSchedule
    mode_edges_ns: tuple[float, ...]
    pair_nbar: float
    emission: str
    stokes_eta: float
    ret_base: float
    tau_spin_ns: float
    antistokes_eta: float
    jitter_sigma_ns: float
    noise_s_mode_nbar: float
    noise_as_edges_ns: tuple[float, ...]
    noise_as_mode_nbars: tuple[float, ...]
    echo_mean: float
    echo_t_ns: float
    echo_sigma_ns: float
    dark_mean_s: float
    dark_mean_as: float
    splitter: str | None
    do_stokes: bool
    do_antistokes: bool

    @property
    def n_modes(self) -> int:
        return len(self.mode_edges_ns) - 1


def _mode_edges(cfg: ExperimentConfig, schedule: TrialSchedule) -> np.ndarray:
    width = cfg.gen_mode_width_ns if cfg.gen_mode_width_ns is not None else cfg.write_fwhm_ns
    lo, hi = schedule.stokes_gate
    span = hi - lo
    n = max(1, int(span / width + 1e-9))
    return np.linspace(lo, hi, n + 1)


def _mean_decoh(edges: np.ndarray, read_ns: float, tau_ns: float) -> np.ndarray:
    """Mean of exp(-((read - t)/tau)^2) over each mode bin."""
    a = (read_ns - edges[:-1]) / tau_ns
    b = (read_ns - edges[1:]) / tau_ns
    erf = np.vectorize(math.erf)
    return np.sqrt(np.pi) / 2.0 * (erf(a) - erf(b)) / (a - b)


def _noise_anchor(cfg: ExperimentConfig) -> tuple[float, float, float]:
    """Absolute background densities at the config's nominal operating point.

    Returns (Stokes background per ns of gate, anti-Stokes stored background
    per ns of gate before spin decay, echo mean per trial).  The anti-Stokes
    background models uncorrelated spin-wave excitations created during the
    write window: they are retrieved through the same Gaussian spin decay as
    the signal, so their detected level at the anchor point carries the
    anchor's mean decoherence factor.
    """
    schedule = build_schedule(cfg)
    edges = _mode_edges(cfg, schedule)
    gate_span = schedule.stokes_gate[1] - schedule.stokes_gate[0]
    tau_ns = linewidth_khz_to_tau_us(cfg.spin_linewidth_kHz) * 1e3

    target = cfg.stokes_creation_probability
    nu_s = cfg.uncorrelated_noise_fraction_s * target

    dark_s = cfg.dark_count_rate_hz * gate_span * 1e-9
    dark_as = cfg.dark_count_rate_hz * (
        schedule.antistokes_gate[1] - schedule.antistokes_gate[0]
    ) * 1e-9

    nbar = _solve_pair_nbar(
        cfg.stokes_creation_probability,
        cfg.stokes_transmission,
        len(edges) - 1,
        nu_s,
        dark_s,
    )
    b = cfg.readout_budget
    ret_base = b.eta_rp * b.eta_reph * b.beta_br
    decoh = _mean_decoh(edges, schedule.read_t_ns, tau_ns)
    mu_retr = float(nbar * ret_base * cfg.antistokes_transmission * np.sum(decoh))
    f_as = cfg.uncorrelated_noise_fraction_as
    f_echo = cfg.echo_leak_fraction
    total = (mu_retr + dark_as) / (1.0 - f_as - f_echo)
    nu_as_detected = f_as * total
    # Normalize the stored-background density over the padded noise grid so
    # the configured fraction equals the detected fraction at the anchor.
    mode_width = float(edges[1] - edges[0])
    noise_edges = np.concatenate(
        ([edges[0] - mode_width], edges, [edges[-1] + mode_width])
    )
    weight = float(
        np.sum(np.diff(noise_edges) * _mean_decoh(noise_edges, schedule.read_t_ns, tau_ns))
    )
    return nu_s / gate_span, nu_as_detected / weight, f_echo * total


def _solve_pair_nbar(
    target: float,
    eta_s: float,
    n_modes: int,
    nu_s_total: float,
    dark_s_mean: float,
) -> float:
    """Per-mode thermal mean such that the total detected Stokes click
    probability equals ``target`` (signal, background and dark clicks
    combined as independent sources)."""
    if target >= 1.0:
        raise SimulationError(f"per-trial Stokes probability must be < 1, got {target}")
    nu_m = nu_s_total / n_modes
    p_noise = 1.0 - (1.0 / (1.0 + nu_m)) ** n_modes
    p_dark = 1.0 - math.exp(-dark_s_mean)
    survive = (1.0 - p_noise) * (1.0 - p_dark)
    if survive <= 0.0:
        return 0.0
    p_signal = 1.0 - (1.0 - target) / survive
    if p_signal <= 0.0:
        return 0.0
    if eta_s <= 0.0:
        raise SimulationError("stokes_transmission must be > 0 to reach the target rate")
    return ((1.0 - p_signal) ** (-1.0 / n_modes) - 1.0) / eta_s


def calibrate(
    run_cfg: ExperimentConfig,
    base_cfg: ExperimentConfig | None = None,
    *,
    splitter: str | None = None,
    channels: tuple[str, ...] = ("S", "AS"),
    emission: str = "thermal",
    pair_jitter_fwhm_ns: float | None = None,
) -> GenerationParams:
    """Resolve a config (plus sweep overrides) into sampling parameters.

    ``base_cfg`` anchors the absolute background levels; it defaults to the
    run config itself.  Sweeps pass the unmodified config here so that noise
    floors stay fixed while the swept axis moves.
    """
    if emission not in ("thermal", "poisson"):
        raise SimulationError(f"unknown emission model {emission!r}")
    if splitter not in (None, "stokes", "antistokes"):
        raise SimulationError(f"unknown splitter {splitter!r}")
    problems = validate(run_cfg)
    if problems:
        raise SimulationError("invalid config: " + "; ".join(problems))

    base = base_cfg if base_cfg is not None else run_cfg
    schedule = build_schedule(run_cfg)
    edges = _mode_edges(run_cfg, schedule)
    n_modes = len(edges) - 1
    gate_span = schedule.stokes_gate[1] - schedule.stokes_gate[0]
    tau_ns = linewidth_khz_to_tau_us(run_cfg.spin_linewidth_kHz) * 1e3

    nu_s_per_ns, nu_as_stored_per_ns, nu_echo = _noise_anchor(base)
    nu_s = nu_s_per_ns * gate_span
    # Background spin-waves are also created in the write-pulse tails just
    # outside the Stokes gate, so the anti-Stokes background grid carries one
    # extra mode on each side of the signal modes.
    mode_width = float(edges[1] - edges[0])
    noise_edges = np.concatenate(
        ([edges[0] - mode_width], edges, [edges[-1] + mode_width])
    )
    noise_widths = np.diff(noise_edges)
    noise_decoh = _mean_decoh(noise_edges, schedule.read_t_ns, tau_ns)
    noise_as_mode = nu_as_stored_per_ns * noise_widths * noise_decoh

    dark_s = run_cfg.dark_count_rate_hz * gate_span * 1e-9
    dark_as = run_cfg.dark_count_rate_hz * (
        schedule.antistokes_gate[1] - schedule.antistokes_gate[0]
    ) * 1e-9

    # The configured slope defines the detected rate in the base config's
    # collection window; the emission itself is a brightness density per unit
    # time, so sweeping the window rescales the rate proportionally.
    base_schedule = build_schedule(base)
    base_edges = _mode_edges(base, base_schedule)
    base_span = base_schedule.stokes_gate[1] - base_schedule.stokes_gate[0]
    base_width = float(base_edges[1] - base_edges[0])
    nbar_base = _solve_pair_nbar(
        run_cfg.stokes_creation_probability,
        run_cfg.stokes_transmission,
        len(base_edges) - 1,
        nu_s_per_ns * base_span,
        base.dark_count_rate_hz * base_span * 1e-9,
    )
    nbar = nbar_base / base_width * mode_width
    if emission == "poisson":
        # Independent Poisson brightness matched to the same detected rate:
        # solve 1 - exp(-n_modes * lam * eta_s) = detected signal prob.
        p_signal = 1.0 - (1.0 + nbar * run_cfg.stokes_transmission) ** (-n_modes)
        if p_signal >= 1.0 or run_cfg.stokes_transmission <= 0:
            lam = 0.0
        else:
            lam = -math.log(1.0 - p_signal) / (n_modes * run_cfg.stokes_transmission)
        nbar = lam

    b = run_cfg.readout_budget
    jitter_fwhm = (
        pair_jitter_fwhm_ns
        if pair_jitter_fwhm_ns is not None
        else PAIR_JITTER_FWHM_FRACTION * run_cfg.write_fwhm_ns
    )
    return GenerationParams(
        schedule=schedule,
        mode_edges_ns=tuple(float(e) for e in edges),
        pair_nbar=float(nbar),
        emission=emission,
        stokes_eta=run_cfg.stokes_transmission,
        ret_base=b.eta_rp * b.eta_reph * b.beta_br,
        tau_spin_ns=tau_ns,
        antistokes_eta=run_cfg.antistokes_transmission,
        jitter_sigma_ns=jitter_fwhm / _GAUSS_FWHM,
        noise_s_mode_nbar=nu_s / n_modes,
        noise_as_edges_ns=tuple(float(e) for e in noise_edges),
        noise_as_mode_nbars=tuple(float(x) for x in noise_as_mode),
        echo_mean=nu_echo,
        echo_t_ns=schedule.read_t_ns + run_cfg.echo_leak_time_us * 1e3,
        echo_sigma_ns=run_cfg.echo_leak_fwhm_us * 1e3 / _GAUSS_FWHM,
        dark_mean_s=dark_s,
        dark_mean_as=dark_as,
        splitter=splitter,
        do_stokes="S" in channels,
        do_antistokes="AS" in channels,
    )


# --- sampling helpers -------------------------------------------------------


def _thermal_counts(rng: np.random.Generator, nbar: float, n: int):
    """Trial indices and photon counts (>= 1) for one thermal mode.

    Equivalent in distribution to drawing a thermal count for each of the n
    trials; zero-count trials are skipped via position sampling when the
    occupancy is low.
    """
    if nbar <= 0.0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    ratio = nbar / (1.0 + nbar)
    log_ratio = math.log(ratio)
    if ratio >= _SPARSE_Q:
        u = rng.random(n)
        counts = np.floor(np.log(u) / log_ratio).astype(np.int64)
        idx = np.nonzero(counts > 0)[0]
        return idx, counts[idx]
    k = rng.binomial(n, ratio)
    if k == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    idx = np.sort(rng.choice(n, size=k, replace=False)).astype(np.int64)
    counts = 1 + np.floor(np.log(rng.random(k)) / log_ratio).astype(np.int64)
    return idx, counts


def _poisson_counts(rng: np.random.Generator, lam: float, n: int):
    if lam <= 0.0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    counts = rng.poisson(lam, n)
    idx = np.nonzero(counts > 0)[0]
    return idx.astype(np.int64), counts[idx].astype(np.int64)


def _scatter_poisson(rng: np.random.Generator, mean_per_trial: float, n: int):
    """Trial index per event for a homogeneous per-trial Poisson source."""
    if mean_per_trial <= 0.0:
        return np.empty(0, np.int64)
    total = rng.poisson(mean_per_trial * n)
    if total == 0:
        return np.empty(0, np.int64)
    return rng.integers(0, n, size=total, dtype=np.int64)


def _route(rng: np.random.Generator, n: int, split: bool) -> np.ndarray:
    if not split:
        return np.zeros(n, dtype=np.uint8)
    return rng.integers(0, 2, size=n, dtype=np.uint8)


def _merge_clicks(trial, det, t_ns, gate: tuple[int, int]):
    """Clamp into the gate and keep the earliest candidate per (trial, det).

    Detectors are not number resolving: all photons and noise arriving in
    one detector's gate collapse to a single click at the earliest time.
    """
    if len(trial) == 0:
        return trial, det, t_ns.astype(np.int64)
    t = np.clip(np.rint(t_ns), gate[0], gate[1] - 1).astype(np.int64)
    key = trial * 2 + det
    order = np.lexsort((t, key))
    key_sorted = key[order]
    first = np.empty(len(key_sorted), dtype=bool)
    first[0] = True
    np.not_equal(key_sorted[1:], key_sorted[:-1], out=first[1:])
    keep = order[first]
    return trial[keep], det[keep], t[keep]


def _simulate_block(p: GenerationParams, n: int, rng: np.random.Generator):
    """Generate one block of n trials.  Returns per-channel click arrays."""
    edges = np.asarray(p.mode_edges_ns)
    read_t = float(p.schedule.read_t_ns)
    afc = float(p.schedule.afc_delay_ns)

    s_trial: list[np.ndarray] = []
    s_det: list[np.ndarray] = []
    s_t: list[np.ndarray] = []
    a_trial: list[np.ndarray] = []
    a_det: list[np.ndarray] = []
    a_t: list[np.ndarray] = []

    def emit_stokes(trial, det, t):
        s_trial.append(trial)
        s_det.append(det)
        s_t.append(t)

    def emit_antistokes(trial, det, t):
        a_trial.append(trial)
        a_det.append(det)
        a_t.append(t)

    def photon_times(rng, mode_idx, counts, lo, width):
        trial = np.repeat(mode_idx, counts)
        t = lo + width * rng.random(len(trial))
        return trial, t

    for m in range(p.n_modes):
        lo, hi = edges[m], edges[m + 1]
        width = hi - lo

        # Correlated pairs (or independent Poisson photons per channel in the
        # classical substitute model).
        # The rephasing jitter is drawn once per occupied (trial, mode):
        # photons retrieved from one collective excitation share a common
        # re-emission envelope, so every pair sum keeps the configured peak
        # width while within-mode bunching survives the jitter.
        if p.emission == "thermal":
            idx, counts = _thermal_counts(rng, p.pair_nbar, n)
            trial, t_emit = photon_times(rng, idx, counts, lo, width)
            if p.do_stokes:
                det_mask = rng.random(len(trial)) < p.stokes_eta
                emit_stokes(
                    trial[det_mask],
                    _route(rng, int(det_mask.sum()), p.splitter == "stokes"),
                    t_emit[det_mask],
                )
            if p.do_antistokes:
                jitter = np.repeat(
                    p.jitter_sigma_ns * rng.standard_normal(len(idx)), counts
                )
                p_as = (
                    p.ret_base
                    * np.exp(-(((read_t - t_emit) / p.tau_spin_ns) ** 2))
                    * p.antistokes_eta
                )
                as_mask = rng.random(len(trial)) < p_as
                n_as = int(as_mask.sum())
                t_as = read_t + afc - t_emit[as_mask] + jitter[as_mask]
                emit_antistokes(
                    trial[as_mask], _route(rng, n_as, p.splitter == "antistokes"), t_as
                )
        else:
            if p.do_stokes:
                idx, counts = _poisson_counts(rng, p.pair_nbar, n)
                trial, t_emit = photon_times(rng, idx, counts, lo, width)
                det_mask = rng.random(len(trial)) < p.stokes_eta
                emit_stokes(
                    trial[det_mask],
                    _route(rng, int(det_mask.sum()), p.splitter == "stokes"),
                    t_emit[det_mask],
                )
            if p.do_antistokes:
                idx, counts = _poisson_counts(rng, p.pair_nbar, n)
                trial, t_emit = photon_times(rng, idx, counts, lo, width)
                jitter = np.repeat(
                    p.jitter_sigma_ns * rng.standard_normal(len(idx)), counts
                )
                p_as = (
                    p.ret_base
                    * np.exp(-(((read_t - t_emit) / p.tau_spin_ns) ** 2))
                    * p.antistokes_eta
                )
                as_mask = rng.random(len(trial)) < p_as
                n_as = int(as_mask.sum())
                t_as = read_t + afc - t_emit[as_mask] + jitter[as_mask]
                emit_antistokes(
                    trial[as_mask], _route(rng, n_as, p.splitter == "antistokes"), t_as
                )

        # Uncorrelated thermal Stokes background, co-located with the mode.
        # Background carries no rephasing jitter: it is not tied to the
        # write pulse envelope.
        if p.do_stokes and p.noise_s_mode_nbar > 0:
            idx, counts = _thermal_counts(rng, p.noise_s_mode_nbar, n)
            trial, t_noise = photon_times(rng, idx, counts, lo, width)
            emit_stokes(
                trial, _route(rng, len(trial), p.splitter == "stokes"), t_noise
            )

    # Retrieved anti-Stokes background: thermal spin-wave noise on its own
    # (padded) mode grid, mapped through the rephasing law.
    if p.do_antistokes:
        noise_edges = np.asarray(p.noise_as_edges_ns)
        for m, nbar_m in enumerate(p.noise_as_mode_nbars):
            if nbar_m <= 0:
                continue
            lo, hi = noise_edges[m], noise_edges[m + 1]
            idx, counts = _thermal_counts(rng, nbar_m, n)
            trial, t_noise = photon_times(rng, idx, counts, lo, hi - lo)
            emit_antistokes(
                trial,
                _route(rng, len(trial), p.splitter == "antistokes"),
                read_t + afc - t_noise,
            )

    # Echo leak of the write pulse into the anti-Stokes gate.
    if p.do_antistokes and p.echo_mean > 0:
        trial = _scatter_poisson(rng, p.echo_mean, n)
        t = p.echo_t_ns + p.echo_sigma_ns * rng.standard_normal(len(trial))
        emit_antistokes(trial, _route(rng, len(trial), p.splitter == "antistokes"), t)

    # Gated dark counts, homogeneous Poisson per detector.
    for channel_on, gate, mean, is_split, emit in (
        (p.do_stokes, p.schedule.stokes_gate, p.dark_mean_s, p.splitter == "stokes", emit_stokes),
        (
            p.do_antistokes,
            p.schedule.antistokes_gate,
            p.dark_mean_as,
            p.splitter == "antistokes",
            emit_antistokes,
        ),
    ):
        if not channel_on or mean <= 0:
            continue
        for det_id in range(2 if is_split else 1):
            trial = _scatter_poisson(rng, mean, n)
            t = gate[0] + (gate[1] - gate[0]) * rng.random(len(trial))
            emit(trial, np.full(len(trial), det_id, dtype=np.uint8), t)

    out = []
    for channel_on, gate, parts in (
        (p.do_stokes, p.schedule.stokes_gate, (s_trial, s_det, s_t)),
        (p.do_antistokes, p.schedule.antistokes_gate, (a_trial, a_det, a_t)),
    ):
        if not channel_on or not parts[0]:
            out.append(
                (np.empty(0, np.int64), np.empty(0, np.uint8), np.empty(0, np.int64))
            )
            continue
        trial = np.concatenate(parts[0])
        det = np.concatenate(parts[1]).astype(np.uint8)
        t = np.concatenate(parts[2])
        out.append(_merge_clicks(trial, det, t, gate))
    return out


def _block_rng(seed: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(_STREAM_RUN, block))
    return np.random.Generator(np.random.Philox(ss))


def run_trials(
    cfg: ExperimentConfig,
    n_trials: int,
    *,
    seed: int | None = None,
    base_cfg: ExperimentConfig | None = None,
    splitter: str | None = None,
    channels: tuple[str, ...] = ("S", "AS"),
    emission: str = "thermal",
    pair_jitter_fwhm_ns: float | None = None,
    threads: int = 1,
) -> EventStream:
    """Simulate ``n_trials`` trials and return the merged event stream."""
    if n_trials < 1:
        raise SimulationError(f"n_trials must be >= 1, got {n_trials}")
    params = calibrate(
        cfg,
        base_cfg,
        splitter=splitter,
        channels=channels,
        emission=emission,
        pair_jitter_fwhm_ns=pair_jitter_fwhm_ns,
    )
    if seed is None:
        seed = cfg.rng_seed

    blocks = [
        (i, min(BLOCK_TRIALS, n_trials - i * BLOCK_TRIALS))
        for i in range((n_trials + BLOCK_TRIALS - 1) // BLOCK_TRIALS)
    ]

    def one_block(args):
        block_idx, size = args
        rng = _block_rng(seed, block_idx)
        return _simulate_block(params, size, rng)

    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one_block, blocks))
    else:
        results = [one_block(b) for b in blocks]

    chunks_trial: list[np.ndarray] = []
    chunks_chan: list[np.ndarray] = []
    chunks_det: list[np.ndarray] = []
    chunks_t: list[np.ndarray] = []
    for (block_idx, _), (stokes, antis) in zip(blocks, results):
        offset = block_idx * BLOCK_TRIALS
        for code, (trial, det, t) in ((CHANNEL_STOKES, stokes), (CHANNEL_ANTISTOKES, antis)):
            if len(trial) == 0:
                continue
            chunks_trial.append(trial + offset)
            chunks_chan.append(np.full(len(trial), code, dtype=np.uint8))
            chunks_det.append(det)
            chunks_t.append(t)

    meta = {
        "config_hash": config_hash(cfg),
        "seed": seed,
        "splitter": splitter or "none",
        "emission": emission,
        "write_power_uW": cfg.write_power_uW,
    }
    if not chunks_trial:
        return EventStream.empty(n_trials, meta)
    stream = EventStream(
        trial_id=np.concatenate(chunks_trial),
        channel=np.concatenate(chunks_chan),
        detector_id=np.concatenate(chunks_det),
        t_ns=np.concatenate(chunks_t),
        n_trials=n_trials,
        meta=meta,
    )
    return stream.sort()


def sweep_config(cfg: ExperimentConfig, axis: str, value: float) -> ExperimentConfig:
    """Config for one sweep point.  ``storage_time`` moves the read pulse so
    that the mean spin storage time equals the requested value."""
    if axis == "write_power":
        return replace(cfg, write_power_uW=value)
    if axis == "storage_time":
        mean_gate = cfg.stokes_gate_offset_us + 0.5 * cfg.stokes_window_us
        return replace(cfg, read_delay_us=value + mean_gate)
    if axis == "window_T":
        return replace(cfg, stokes_window_us=value)
    raise SimulationError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")


def derive_sweep_seed(seed: int, axis: str, index: int) -> int:
    axis_id = SWEEP_AXES.index(axis)
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(_STREAM_SWEEP, axis_id, index))
    return int(ss.generate_state(1, np.uint64)[0])


def run_sweep(
    cfg: ExperimentConfig,
    axis: str,
    values: list[float],
    n_trials: int,
    *,
    seed: int | None = None,
    **kwargs,
) -> list[tuple[float, EventStream]]:
    """One independent simulation per axis value, each with a derived seed.

    The background noise floor stays anchored to the base config while the
    swept parameter moves.
    """
    if not values:
        raise SimulationError("sweep needs at least one axis value")
    if sorted(values) != list(values) or any(v <= 0 for v in values):
        raise SimulationError("sweep values must be positive and sorted ascending")
    if seed is None:
        seed = cfg.rng_seed
    out = []
    for i, value in enumerate(values):
        run_cfg = sweep_config(cfg, axis, value)
        stream = run_trials(
            run_cfg,
            n_trials,
            seed=derive_sweep_seed(seed, axis, i),
            base_cfg=cfg,
            **kwargs,
        )
        stream.meta["sweep_axis"] = axis
        stream.meta["sweep_value"] = value
        out.append((value, stream))
    return out
