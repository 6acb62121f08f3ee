"""Domain types and parameter vocabulary shared by every other module.

All timing inside a trial is handled in integer nanoseconds relative to the
trial start (the write pulse center).  The trial period is used only to
index trials and to convert rates, never to build absolute timestamps.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, fields, replace

__all__ = [
    "CHANNEL_STOKES",
    "CHANNEL_ANTISTOKES",
    "CHANNEL_NAMES",
    "AFCParams",
    "ConfigError",
    "DetectionEvent",
    "EfficiencyBudget",
    "ExperimentConfig",
    "TrialSchedule",
    "build_schedule",
    "config_from_text",
    "config_hash",
    "config_to_text",
    "validate",
]

CHANNEL_STOKES = 0
CHANNEL_ANTISTOKES = 1
CHANNEL_NAMES = {CHANNEL_STOKES: "S", CHANNEL_ANTISTOKES: "AS"}
CHANNEL_CODES = {v: k for k, v in CHANNEL_NAMES.items()}


class ConfigError(ValueError):
    """Raised for malformed config files or invalid parameter sets."""


@dataclass(frozen=True)
class EfficiencyBudget:
    """Multiplicative read-out efficiency factors.

    The spin-decoherence factor is computed per trial from the storage time
    and is deliberately not stored here.  ``beta_g`` is the fraction of the
    coincidence peak captured by the analysis window; it belongs to the
    detection-window accounting and is never applied during event generation.
    """

    eta_rp: float = 0.40
    eta_reph: float = 0.36
    beta_br: float = 0.60
    beta_g: float = 0.76


@dataclass(frozen=True)
class AFCParams:
    """Comb parameters: peak optical depth, finesse and background depth."""

    d: float = 5.4
    finesse: float = 4.4
    d0: float = 0.4
    eta_afc_measured: float | None = 0.17


@dataclass(frozen=True)
class DetectionEvent:
    """One detector click, timed relative to the start of its trial."""

    trial_id: int
    channel: int
    detector_id: int
    t_ns: int


@dataclass(frozen=True)
class TrialSchedule:
    """Timing layout of one trial, all values in ns from the write pulse.

    Gates are half-open intervals [start, end).  The anti-Stokes gate is
    expressed in absolute trial time; anti-Stokes emission times relative to
    the read pulse are obtained by subtracting ``read_t_ns``.
    """

    write_t_ns: int
    stokes_gate: tuple[int, int]
    read_t_ns: int
    antistokes_gate: tuple[int, int]
    afc_delay_ns: int

    def storage_time_ns(self, stokes_t_ns: float) -> float:
        """Spin storage time for a Stokes emission at ``stokes_t_ns``."""
        return self.read_t_ns - stokes_t_ns

    @property
    def mean_storage_time_us(self) -> float:
        lo, hi = self.stokes_gate
        return (self.read_t_ns - 0.5 * (lo + hi)) / 1e3

    @property
    def rephasing_region(self) -> tuple[int, int]:
        """Absolute window where correlated anti-Stokes photons re-emerge."""
        lo, hi = self.stokes_gate
        return (
            self.read_t_ns + self.afc_delay_ns - hi,
            self.read_t_ns + self.afc_delay_ns - lo,
        )


@dataclass(frozen=True)
class ExperimentConfig:
    """All physical and scheduling parameters of one simulated experiment.

    Field names embed their units.  Probabilities and fractions live in
    [0, 1]; durations are strictly positive where noted by :func:`validate`.
    """

    write_power_uW: float = 16.0
    stokes_prob_per_uW: float = 0.000625
    afc_delay_us: float = 8.0
    write_fwhm_ns: float = 1000.0
    stokes_gate_offset_us: float = 1.4
    stokes_window_us: float = 2.0
    read_delay_us: float = 8.0
    trial_period_us: float = 313.0
    trials_per_prep: int = 500
    readout_budget: EfficiencyBudget = field(default_factory=EfficiencyBudget)
    spin_linewidth_kHz: float = 45.0
    branching_ratio: float = 0.60
    stokes_transmission: float = 0.75
    antistokes_transmission: float = 0.24
    dark_count_rate_hz: float = 10.0
    echo_leak_fraction: float = 0.04
    echo_leak_time_us: float = 8.5
    echo_leak_fwhm_us: float = 1.0
    uncorrelated_noise_fraction_s: float = 0.02
    uncorrelated_noise_fraction_as: float = 0.825
    rng_seed: int = 20170831
    # Plumbing fields not part of the headline parameter set: anti-Stokes
    # gate placement and the generator's temporal mode granularity.
    antistokes_gate_offset_us: float = 0.5
    antistokes_gate_width_us: float | None = None
    gen_mode_width_ns: float | None = None
    afc: AFCParams = field(default_factory=AFCParams)

    @property
    def stokes_creation_probability(self) -> float:
        """Detected Stokes probability per trial, P_s = slope * P_w."""
        return self.stokes_prob_per_uW * self.write_power_uW

    def with_(self, **kwargs) -> "ExperimentConfig":
        return replace(self, **kwargs)


def _antistokes_gate_width_us(cfg: ExperimentConfig) -> float:
    if cfg.antistokes_gate_width_us is not None:
        return cfg.antistokes_gate_width_us
    rephase_end = cfg.afc_delay_us - cfg.stokes_gate_offset_us + 1.0
    echo_end = cfg.echo_leak_time_us + 2.0 * cfg.echo_leak_fwhm_us
    return max(rephase_end, echo_end) - cfg.antistokes_gate_offset_us


def build_schedule(cfg: ExperimentConfig) -> TrialSchedule:
    """Derive the per-trial gate layout from a config."""
    gate_lo = round(cfg.stokes_gate_offset_us * 1e3)
    gate_hi = round((cfg.stokes_gate_offset_us + cfg.stokes_window_us) * 1e3)
    read_t = round(cfg.read_delay_us * 1e3)
    as_lo = read_t + round(cfg.antistokes_gate_offset_us * 1e3)
    as_hi = as_lo + round(_antistokes_gate_width_us(cfg) * 1e3)
    return TrialSchedule(
        write_t_ns=0,
        stokes_gate=(gate_lo, gate_hi),
        read_t_ns=read_t,
        antistokes_gate=(as_lo, as_hi),
        afc_delay_ns=round(cfg.afc_delay_us * 1e3),
    )


def _check_fraction(out: list[str], name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        out.append(f"{name} out of [0,1]: {value!r}")


def _check_positive(out: list[str], name: str, value: float) -> None:
    if not value > 0.0:
        out.append(f"{name} must be > 0: {value!r}")


def _check_nonnegative(out: list[str], name: str, value: float) -> None:
    if not value >= 0.0:
        out.append(f"{name} must be >= 0: {value!r}")


def validate(cfg: ExperimentConfig) -> list[str]:
    """Return the list of invariant violations; empty means valid.

    Total function: never raises, each violation names the offending field
    and rule.  The result does not depend on any external state, so calling
    it twice gives the same list.
    """
    v: list[str] = []
    _check_nonnegative(v, "write_power_uW", cfg.write_power_uW)
    _check_nonnegative(v, "stokes_prob_per_uW", cfg.stokes_prob_per_uW)
    _check_positive(v, "afc_delay_us", cfg.afc_delay_us)
    _check_positive(v, "write_fwhm_ns", cfg.write_fwhm_ns)
    _check_nonnegative(v, "stokes_gate_offset_us", cfg.stokes_gate_offset_us)
    _check_positive(v, "stokes_window_us", cfg.stokes_window_us)
    _check_positive(v, "read_delay_us", cfg.read_delay_us)
    _check_positive(v, "trial_period_us", cfg.trial_period_us)
    if cfg.trials_per_prep < 1:
        v.append(f"trials_per_prep must be >= 1: {cfg.trials_per_prep!r}")
    _check_positive(v, "spin_linewidth_kHz", cfg.spin_linewidth_kHz)
    _check_fraction(v, "branching_ratio", cfg.branching_ratio)
    _check_fraction(v, "stokes_transmission", cfg.stokes_transmission)
    _check_fraction(v, "antistokes_transmission", cfg.antistokes_transmission)
    _check_nonnegative(v, "dark_count_rate_hz", cfg.dark_count_rate_hz)
    _check_fraction(v, "echo_leak_fraction", cfg.echo_leak_fraction)
    _check_positive(v, "echo_leak_fwhm_us", cfg.echo_leak_fwhm_us)
    _check_fraction(v, "uncorrelated_noise_fraction_s", cfg.uncorrelated_noise_fraction_s)
    _check_fraction(v, "uncorrelated_noise_fraction_as", cfg.uncorrelated_noise_fraction_as)
    _check_nonnegative(v, "antistokes_gate_offset_us", cfg.antistokes_gate_offset_us)
    if cfg.antistokes_gate_width_us is not None:
        _check_positive(v, "antistokes_gate_width_us", cfg.antistokes_gate_width_us)
    if cfg.gen_mode_width_ns is not None:
        _check_positive(v, "gen_mode_width_ns", cfg.gen_mode_width_ns)

    b = cfg.readout_budget
    _check_fraction(v, "readout_budget.eta_rp", b.eta_rp)
    _check_fraction(v, "readout_budget.eta_reph", b.eta_reph)
    _check_fraction(v, "readout_budget.beta_br", b.beta_br)
    _check_fraction(v, "readout_budget.beta_g", b.beta_g)

    a = cfg.afc
    _check_nonnegative(v, "afc.d", a.d)
    if a.finesse < 1.0:
        v.append(f"afc.finesse must be >= 1: {a.finesse!r}")
    _check_nonnegative(v, "afc.d0", a.d0)
    if a.eta_afc_measured is not None:
        _check_fraction(v, "afc.eta_afc_measured", a.eta_afc_measured)

    gate_close = cfg.stokes_gate_offset_us + cfg.stokes_window_us
    if gate_close > cfg.read_delay_us:
        v.append(
            "stokes gate must close before the read pulse: "
            f"offset {cfg.stokes_gate_offset_us} us + window "
            f"{cfg.stokes_window_us} us > read_delay {cfg.read_delay_us} us"
        )
    p_s = cfg.stokes_creation_probability
    if not p_s < 1.0:
        v.append(f"stokes_prob_per_uW * write_power_uW must be < 1: {p_s!r}")
    if cfg.echo_leak_fraction + cfg.uncorrelated_noise_fraction_as >= 1.0:
        v.append(
            "echo_leak_fraction + uncorrelated_noise_fraction_as must be < 1: "
            f"{cfg.echo_leak_fraction + cfg.uncorrelated_noise_fraction_as!r}"
        )
    if not 0 <= cfg.rng_seed < 2**64:
        v.append(f"rng_seed must fit an unsigned 64-bit integer: {cfg.rng_seed!r}")
    return v


# --- flat key = value config file format -----------------------------------

_BUDGET_KEYS = {
    "budget_eta_rp": "eta_rp",
    "budget_eta_reph": "eta_reph",
    "budget_beta_br": "beta_br",
    "budget_beta_g": "beta_g",
}
_AFC_KEYS = {
    "afc_d": "d",
    "afc_finesse": "finesse",
    "afc_d0": "d0",
    "afc_eta_measured": "eta_afc_measured",
}
_INT_FIELDS = {"trials_per_prep", "rng_seed"}


def _scalar_field_names() -> list[str]:
    return [
        f.name
        for f in fields(ExperimentConfig)
        if f.name not in ("readout_budget", "afc")
    ]


def config_to_text(cfg: ExperimentConfig) -> str:
    """Serialize to the flat key = value format (one key per field)."""
    lines = ["# afcdlcz experiment configuration"]
    for name in _scalar_field_names():
        value = getattr(cfg, name)
        if value is None:
            continue
        lines.append(f"{name} = {value!r}" if isinstance(value, str) else f"{name} = {value}")
    for key, attr in _BUDGET_KEYS.items():
        lines.append(f"{key} = {getattr(cfg.readout_budget, attr)}")
    for key, attr in _AFC_KEYS.items():
        value = getattr(cfg.afc, attr)
        if value is None:
            continue
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def config_from_text(text: str) -> ExperimentConfig:
    """Parse the flat key = value format.  Unknown keys are errors."""
    scalar_names = set(_scalar_field_names())
    scalars: dict[str, object] = {}
    budget: dict[str, float] = {}
    afc: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _BUDGET_KEYS and key not in _AFC_KEYS and key not in scalar_names:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            parsed = int(value) if key in _INT_FIELDS else float(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {value!r}") from exc
        if key in _BUDGET_KEYS:
            budget[_BUDGET_KEYS[key]] = parsed
        elif key in _AFC_KEYS:
            afc[_AFC_KEYS[key]] = parsed
        else:
            scalars[key] = parsed
    kwargs: dict[str, object] = dict(scalars)
    if budget:
        kwargs["readout_budget"] = EfficiencyBudget(**budget)
    if afc:
        # eta_afc_measured is optional: absent from the file means "not
        # measured", not the dataclass default.
        afc.setdefault("eta_afc_measured", None)
        kwargs["afc"] = AFCParams(**afc)
    return ExperimentConfig(**kwargs)


def config_hash(cfg: ExperimentConfig) -> str:
    """Short stable digest of the canonical serialization."""
    return hashlib.sha256(config_to_text(cfg).encode()).hexdigest()[:12]
