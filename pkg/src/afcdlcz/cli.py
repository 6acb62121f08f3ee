"""Command line front end.

Subcommands: simulate, analyze, sweep, budget, reproduce, selftest.
Exit codes: 0 success, 1 usage error, 2 validation error, 3 band failure in
a reproduce preset.  Randomized commands take --seed; without it a seed is
drawn once and recorded in every output header.
"""

from __future__ import annotations

import argparse
import secrets
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    AnalysisError,
    CorrelationReport,
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
    ConfigError,
    ExperimentConfig,
    build_schedule,
    config_from_text,
    config_hash,
    validate,
)
from .events import EventStream, StreamFormatError
from .fitting import FitError
from .memory import (
    DECAY_TIME_LINEWIDTH_PRODUCT,
    comb_dephasing_factor,
    eta_decoh,
    eta_loss,
    eta_write,
    infer_eta_rephasing,
    linewidth_khz_to_tau_us,
    readout_budget,
)
from .presets import PRESET_NAMES, run_preset
from .simulate import SWEEP_AXES, SimulationError, run_sweep, run_trials, sweep_config

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_BAND = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _load_config(path: str | None) -> ExperimentConfig:
    if path is None:
        cfg = ExperimentConfig()
    else:
        cfg = config_from_text(Path(path).read_text())
    problems = validate(cfg)
    if problems:
        raise ConfigError("invalid config:\n  " + "\n  ".join(problems))
    return cfg


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    drawn = secrets.randbits(63)
    print(f"# auto seed = {drawn} (pass --seed {drawn} to reproduce)")
    return drawn


def _parse_values(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise _UsageError(f"bad value list {text!r}") from exc


# --- subcommands -------------------------------------------------------------


def _cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    seed = _resolve_seed(args.seed)
    channels = {"both": ("S", "AS"), "S": ("S",), "AS": ("AS",)}[args.channels]
    splitter = None if args.splitter == "none" else args.splitter
    stream = run_trials(
        cfg,
        args.trials,
        seed=seed,
        splitter=splitter,
        channels=channels,
        emission=args.emission,
        threads=args.threads,
    )
    stream.meta["tool"] = f"afcdlcz {__version__}"
    stream.write(args.out)
    print(f"wrote {len(stream)} events from {args.trials} trials to {args.out}")
    return EXIT_OK


def _write_histograms(prefix: str, hist, meta_lines: list[str]) -> None:
    def dump(name, edges, counts, value_name):
        path = f"{prefix}_{name}.csv"
        lines = list(meta_lines)
        lines.append(f"bin_start_ns,bin_center_us,{value_name}")
        for e, c in zip(edges[:-1], counts):
            lines.append(f"{int(e)},{(int(e) + hist.bin_ns / 2) / 1e3:.10g},{int(c)}")
        Path(path).write_text("\n".join(lines) + "\n")
        print(f"wrote {path}")

    dump("sum_histogram", hist.sum_edges_ns, hist.sum_counts, "coincidences")
    dump("stokes_histogram", hist.stokes_edges_ns, hist.stokes_counts, "counts")
    dump("antistokes_histogram", hist.antistokes_edges_ns, hist.antistokes_counts, "counts")


def _cmd_analyze(args) -> int:
    cfg = _load_config(args.config)
    schedule = build_schedule(cfg)
    stream = EventStream.read(args.events)
    offsets = tuple(
        int(k) for k in args.offsets.split(",") if k.strip()
    ) if args.offsets else None
    kwargs = {"bin_ns": args.bin_ns, "window_ns": args.window_ns}
    if offsets:
        kwargs["offsets"] = tuple(sorted(set(offsets) | {-k for k in offsets}))

    res = g2_cross(stream, schedule, **kwargs)
    ro = readout_efficiency(stream, schedule, cfg, bin_ns=args.bin_ns, window_ns=args.window_ns)

    g2_ss = g2_asas = None
    if args.auto:
        for channel, label in ((CHANNEL_STOKES, "stokes"), (CHANNEL_ANTISTOKES, "antistokes")):
            try:
                auto = g2_auto(stream, schedule, channel, delta_tau_ns=args.window_ns)
            except AnalysisError as exc:
                print(f"# auto-correlation on {label} skipped: {exc}")
                continue
            if channel == CHANNEL_STOKES:
                g2_ss = auto
            else:
                g2_asas = auto

    r_cs = r_sigma = None
    if g2_ss is not None and g2_asas is not None:
        r_cs, r_sigma = cauchy_schwarz_r(
            res.g2, g2_ss.g2, g2_asas.g2,
            sigma_cross=res.sigma, sigma_ss=g2_ss.sigma, sigma_asas=g2_asas.sigma,
        )

    report = CorrelationReport(
        g2_cross=res.g2,
        g2_cross_sigma=res.sigma,
        p_s=min(res.p_s, 1.0),
        p_as=min(res.p_as, 1.0),
        p_coinc=min(res.p_coinc, 1.0),
        p_coinc_accidental=min(res.accidental_per_trial, 1.0),
        eta_ro=ro.eta_ro,
        eta_ro_sigma=ro.sigma,
        n_trials=stream.n_trials,
        bin_ns=args.bin_ns,
        window_ns=args.window_ns,
        g2_ss=g2_ss.g2 if g2_ss else None,
        g2_ss_sigma=g2_ss.sigma if g2_ss else None,
        g2_asas=g2_asas.g2 if g2_asas else None,
        g2_asas_sigma=g2_asas.sigma if g2_asas else None,
        r_cs=r_cs,
        r_cs_sigma=r_sigma,
    )
    meta_lines = [
        f"# tool=afcdlcz {__version__}",
        f"# config_hash={config_hash(cfg)}",
        f"# events={args.events}",
        f"# n_trials={stream.n_trials}",
    ]
    if "seed" in stream.meta:
        meta_lines.append(f"# seed={stream.meta['seed']}")
    prefix = args.out_prefix
    Path(f"{prefix}_report.txt").write_text(
        "\n".join(meta_lines) + "\n" + report.to_text()
    )
    Path(f"{prefix}_report.json").write_text(report.to_json() + "\n")
    print(report.to_text(), end="")
    try:
        tm = timing_metrics(stream, schedule, bin_ns=args.bin_ns, window_ns=args.window_ns)
        print(
            f"peak_centroid_ns = {tm.centroid_ns:.1f}\n"
            f"peak_fwhm_ns = {tm.fwhm_ns:.1f}\n"
            f"beta_g = {tm.beta_g:.4f}"
        )
    except AnalysisError:
        pass
    _write_histograms(prefix, coincidence_histogram(stream, schedule, bin_ns=args.bin_ns), meta_lines)
    if args.sweep_out:
        delta = args.sweep_delta_tau_ns or cfg.write_fwhm_ns
        mm = multimode_analysis(stream, schedule, cfg, delta_tau_ns=delta)
        lines = list(meta_lines)
        lines.append(
            "window_us,n_placements,mean_coincidences,coincidences_per_hour,mean_g2,g2_sigma"
        )
        for row in mm.rows:
            lines.append(
                f"{row.window_ns / 1e3:.10g},{row.n_placements},"
                f"{row.mean_coincidences:.10g},{row.coincidences_per_hour:.10g},"
                f"{row.mean_g2:.10g},{row.g2_sigma:.10g}"
            )
        Path(args.sweep_out).write_text("\n".join(lines) + "\n")
        print(f"wrote {args.sweep_out} (N_m = {mm.n_modes})")
    print(f"wrote {prefix}_report.txt / .json")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    seed = _resolve_seed(args.seed)
    values = _parse_values(args.values)
    results = run_sweep(
        cfg, args.axis, values, args.trials, seed=seed, threads=args.threads
    )
    lines = [
        f"# tool=afcdlcz {__version__}",
        f"# config_hash={config_hash(cfg)}",
        f"# axis={args.axis}",
        f"# seed={seed}",
        f"# n_trials_per_point={args.trials}",
        "value,p_s,g2_cross,g2_sigma,eta_ro,eta_ro_sigma",
    ]
    for value, stream in results:
        run_cfg = sweep_config(cfg, args.axis, value)
        schedule = build_schedule(run_cfg)
        res = g2_cross(stream, schedule)
        ro = readout_efficiency(stream, schedule, run_cfg)
        lines.append(
            f"{value:.10g},{res.p_s:.10g},{res.g2:.10g},{res.sigma:.10g},"
            f"{ro.eta_ro:.10g},{ro.sigma:.10g}"
        )
    Path(args.out).write_text("\n".join(lines) + "\n")
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_budget(args) -> int:
    cfg = _load_config(args.config)
    schedule = build_schedule(cfg)
    b = cfg.readout_budget
    eta_rp = args.eta_rp if args.eta_rp is not None else b.eta_rp
    eta_reph = args.eta_reph if args.eta_reph is not None else b.eta_reph
    beta_br = args.beta_br if args.beta_br is not None else b.beta_br
    beta_g = args.beta_g if args.beta_g is not None else b.beta_g
    t_s = schedule.mean_storage_time_us
    if args.eta_decoh is not None:
        decoh = args.eta_decoh
        decoh_note = "(explicit)"
    else:
        decoh = eta_decoh(t_s, cfg.spin_linewidth_kHz)
        decoh_note = f"(mean storage {t_s:.2f} us at {cfg.spin_linewidth_kHz:g} kHz)"
    from .config import EfficiencyBudget

    product = readout_budget(
        EfficiencyBudget(eta_rp=eta_rp, eta_reph=eta_reph, beta_br=beta_br, beta_g=beta_g),
        decoh,
    )
    print("read-out efficiency budget")
    print(f"  eta_RP     = {eta_rp:.3f}")
    print(f"  eta_reph   = {eta_reph:.3f}")
    print(f"  eta_decoh  = {decoh:.3f} {decoh_note}")
    print(f"  beta_BR    = {beta_br:.3f}")
    print(f"  beta_G     = {beta_g:.3f}")
    print(f"  eta_RO     = {product:.3f}  ({product * 100:.2f}%)")
    a = cfg.afc
    if a is not None:
        ew = eta_write(a.d, a.finesse)
        el = eta_loss(a.d0)
        print("comb efficiency decomposition")
        print(f"  d = {a.d:g}, F = {a.finesse:g}, d0 = {a.d0:g}")
        print(f"  eta_write  = {ew:.3f}")
        print(f"  eta_loss   = {el:.3f}")
        if a.eta_afc_measured is not None:
            reph = infer_eta_rephasing(a.eta_afc_measured, a.d, a.finesse, a.d0)
            print(f"  eta_AFC    = {a.eta_afc_measured:.3f} (measured)")
            print(f"  eta_reph   = {reph:.3f} (inferred)")
        print(f"  square-comb dephasing bound = {comb_dephasing_factor(a.finesse):.3f}")
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    cfg = _load_config(args.config)
    seed = _resolve_seed(args.seed)
    result = run_preset(
        args.preset,
        args.out_dir,
        config=cfg,
        seed=seed,
        scale=args.scale,
        threads=args.threads,
    )
    print(f"preset {result.name} -> {result.out_dir}")
    for key in sorted(result.report):
        print(f"  {key} = {result.report[key]}")
    for band in result.bands:
        print(f"  [{'PASS' if band.passed else 'FAIL'}] {band.name}: {band.detail}")
    if args.render:
        try:
            from afcdlcz_figures import render_preset
        except ImportError:
            print("# --render requested but the afcdlcz-figures package is not installed")
        else:
            for path in render_preset(args.preset, result.out_dir, result.out_dir):
                print(f"  rendered {path}")
    if not result.all_passed and args.scale >= 1.0:
        return EXIT_BAND
    return EXIT_OK


def _selftest_checks(inject_fault: bool):
    """Yield (name, passed, detail) for the analytic and oracle checks."""
    from . import oracle
    from .config import EfficiencyBudget

    constant = DECAY_TIME_LINEWIDTH_PRODUCT * (1.1 if inject_fault else 1.0)

    # Analytic identities of the memory model.
    ew = eta_write(5.4, 4.4)
    el = eta_loss(0.4)
    reph = infer_eta_rephasing(0.17, 5.4, 4.4, 0.4)
    yield (
        "comb decomposition round trip",
        abs(reph * ew * el - 0.17) < 1e-12,
        f"eta_write * eta_reph * eta_loss = {reph * ew * el:.6f}",
    )
    budget_value = readout_budget(
        EfficiencyBudget(eta_rp=0.40, eta_reph=0.36, beta_br=0.60, beta_g=0.76), 0.64
    )
    yield (
        "five-factor budget",
        abs(budget_value - 0.042025) < 1e-6,
        f"product = {budget_value:.6f}",
    )
    tau = constant / (45.0 * 1e-3)
    decoh_56 = float(np.exp(-((5.6 / tau) ** 2)))
    yield (
        "decay time / linewidth pair",
        abs(tau * 0.045 - 0.3748) < 2e-3 and 0.62 <= decoh_56 <= 0.66,
        f"tau(45 kHz) = {tau:.3f} us, survival(5.6 us) = {decoh_56:.3f}",
    )

    # Monte-Carlo versus the exact truncated-distribution oracle.
    for nbar in (0.01, 0.05, 0.2):
        cfg = _oracle_config(nbar)
        schedule = build_schedule(cfg)
        n = 600_000
        stream = run_trials(cfg, n, seed=1234, pair_jitter_fwhm_ns=0.0)
        res = g2_cross(stream, schedule, window_ns=None)
        p_s_o, p_as_o, p_sas_o = oracle.cross_click_probs(
            nbar, cfg.stokes_transmission, cfg.antistokes_transmission
        )
        g_o = p_sas_o / (p_s_o * p_as_o)
        pulls = [
            abs(res.p_s - p_s_o) / max(np.sqrt(p_s_o / n), 1e-12),
            abs(res.p_as - p_as_o) / max(np.sqrt(p_as_o / n), 1e-12),
            abs(res.p_coinc - p_sas_o) / max(np.sqrt(p_sas_o / n), 1e-12),
            abs(res.g2 - g_o) / res.sigma,
        ]
        yield (
            f"oracle equivalence nbar={nbar}",
            max(pulls) < 3.0,
            f"max pull = {max(pulls):.2f} sigma (g2 {res.g2:.2f} vs {g_o:.2f})",
        )

    # Classical substitute: independent Poisson brightness keeps R <= 1.
    for i, nbar in enumerate((0.05, 0.1, 0.2, 0.4, 0.8)):
        cfg = _oracle_config(nbar, transmissions=1.0)
        schedule = build_schedule(cfg)
        n = 400_000
        cross = g2_cross(
            run_trials(cfg, n, seed=100 + i, emission="poisson", pair_jitter_fwhm_ns=0.0),
            schedule,
            window_ns=None,
        )
        ss = g2_auto(
            run_trials(
                cfg, n, seed=200 + i, emission="poisson",
                splitter="stokes", channels=("S",), pair_jitter_fwhm_ns=0.0,
            ),
            schedule,
            CHANNEL_STOKES,
            delta_tau_ns=schedule.stokes_gate[1] - schedule.stokes_gate[0],
        )
        asas = g2_auto(
            run_trials(
                cfg, n, seed=300 + i, emission="poisson",
                splitter="antistokes", channels=("AS",), pair_jitter_fwhm_ns=0.0,
            ),
            schedule,
            CHANNEL_ANTISTOKES,
            delta_tau_ns=schedule.stokes_gate[1] - schedule.stokes_gate[0],
        )
        r_cs, r_sigma = cauchy_schwarz_r(
            cross.g2, ss.g2, asas.g2,
            sigma_cross=cross.sigma, sigma_ss=ss.sigma, sigma_asas=asas.sigma,
        )
        yield (
            f"classical R bound nbar={nbar}",
            r_cs <= 1.0 + 3.0 * r_sigma,
            f"R = {r_cs:.3f} +- {r_sigma:.3f}",
        )


def _oracle_config(nbar: float, transmissions: float | None = None) -> ExperimentConfig:
    """Single-mode, noise-free config whose detected rate matches ``nbar``."""
    from .config import EfficiencyBudget

    eta_s = transmissions if transmissions is not None else 0.75
    eta_as = transmissions if transmissions is not None else 0.24
    p_click = 1.0 - 1.0 / (1.0 + nbar * eta_s)
    return ExperimentConfig(
        write_power_uW=1.0,
        stokes_prob_per_uW=p_click,
        stokes_window_us=0.5,
        gen_mode_width_ns=1000.0,
        readout_budget=EfficiencyBudget(eta_rp=1.0, eta_reph=1.0, beta_br=1.0, beta_g=0.76),
        spin_linewidth_kHz=1e-9,
        stokes_transmission=eta_s,
        antistokes_transmission=eta_as,
        dark_count_rate_hz=0.0,
        echo_leak_fraction=0.0,
        uncorrelated_noise_fraction_s=0.0,
        uncorrelated_noise_fraction_as=0.0,
    )


def _cmd_selftest(args) -> int:
    failed = 0
    for name, passed, detail in _selftest_checks(args.inject_fault):
        status = "ok" if passed else "FAIL"
        print(f"[{status}] {name}: {detail}")
        if not passed:
            failed += 1
    if failed:
        print(f"selftest: {failed} check(s) failed")
        return 1
    print("selftest: all checks passed")
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="afcdlcz",
        description=(
            "Monte-Carlo simulation and photon-counting analysis of a "
            "rephased spin-wave photon-pair source"
        ),
    )
    parser.add_argument("--version", action="version", version=f"afcdlcz {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a detection-event stream")
    p.add_argument("--config", help="config file (flat key = value); defaults if omitted")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--out", required=True, help="output path (.bin for binary records)")
    p.add_argument("--seed", type=int)
    p.add_argument("--splitter", choices=("none", "stokes", "antistokes"), default="none")
    p.add_argument("--channels", choices=("both", "S", "AS"), default="both")
    p.add_argument("--emission", choices=("thermal", "poisson"), default="thermal")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("analyze", help="turn an event stream into a correlation report")
    p.add_argument("--events", required=True)
    p.add_argument("--config", help="config used to produce the stream")
    p.add_argument("--bin-ns", type=int, default=400, help="sum-histogram bin (ns)")
    p.add_argument("--window-ns", type=float, default=1000.0, help="coincidence window (ns)")
    p.add_argument("--offsets", help="comma list of accidental trial offsets (default 1..5)")
    p.add_argument("--auto", action="store_true", help="also estimate g2 autocorrelations")
    p.add_argument("--out-prefix", default="analysis", help="prefix for report and CSV files")
    p.add_argument(
        "--sweep-out",
        help="write the Stokes window-size sweep (multimode analysis) to this CSV",
    )
    p.add_argument(
        "--sweep-delta-tau-ns",
        type=float,
        help="mode size for --sweep-out (default: write pulse FWHM)",
    )
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("sweep", help="simulate and analyze a parameter sweep")
    p.add_argument("--config")
    p.add_argument("--axis", choices=SWEEP_AXES, required=True)
    p.add_argument("--values", required=True, help="comma separated axis values")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--out", required=True, help="summary CSV path")
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("budget", help="print the read-out efficiency factor table")
    p.add_argument("--config")
    p.add_argument("--eta-rp", type=float)
    p.add_argument("--eta-reph", type=float)
    p.add_argument("--eta-decoh", type=float)
    p.add_argument("--beta-br", type=float)
    p.add_argument("--beta-g", type=float)
    p.set_defaults(func=_cmd_budget)

    p = sub.add_parser("reproduce", help="run a canned figure-reproduction pipeline")
    p.add_argument("preset", choices=PRESET_NAMES)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--config")
    p.add_argument("--seed", type=int)
    p.add_argument("--scale", type=float, default=1.0, help="trial-count multiplier")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument(
        "--render",
        action="store_true",
        help="render figures via the afcdlcz-figures package when installed",
    )
    p.set_defaults(func=_cmd_reproduce)

    p = sub.add_parser("selftest", help="oracle equivalence and analytic identity checks")
    p.add_argument(
        "--inject-fault",
        action="store_true",
        help="corrupt the decay conversion constant to verify the checks trip",
    )
    p.set_defaults(func=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (ConfigError, SimulationError, StreamFormatError, AnalysisError, FitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except KeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
