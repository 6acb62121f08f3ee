import dataclasses
import random

import pytest

from afcdlcz.config import (
    AFCParams,
    ConfigError,
    EfficiencyBudget,
    ExperimentConfig,
    build_schedule,
    config_from_text,
    config_hash,
    config_to_text,
    validate,
)


def test_default_config_is_valid(default_config):
    assert validate(default_config) == []


def test_branching_ratio_range_violation():
    cfg = ExperimentConfig(branching_ratio=1.2)
    violations = validate(cfg)
    assert len(violations) == 1
    assert "branching_ratio" in violations[0]
    assert "[0,1]" in violations[0]


def test_gate_overlap_violation():
    # 7 us offset + 2 us window closes at 9 us, after the 8 us read pulse.
    cfg = ExperimentConfig(stokes_gate_offset_us=7.0, stokes_window_us=2.0, read_delay_us=8.0)
    violations = validate(cfg)
    assert any("read" in v for v in violations)


def test_stokes_probability_cap():
    cfg = ExperimentConfig(write_power_uW=2000.0, stokes_prob_per_uW=0.001)
    assert any("must be < 1" in v for v in validate(cfg))


def test_validate_is_idempotent(default_config):
    bad = ExperimentConfig(branching_ratio=-0.5, stokes_window_us=-1.0)
    assert validate(bad) == validate(bad)
    assert validate(default_config) == validate(default_config)


def test_schedule_layout(default_config):
    sch = build_schedule(default_config)
    assert sch.write_t_ns == 0
    assert sch.stokes_gate == (1400, 3400)
    assert sch.read_t_ns == 8000
    assert sch.write_t_ns < sch.stokes_gate[0] < sch.stokes_gate[1] <= sch.read_t_ns
    assert sch.read_t_ns < sch.antistokes_gate[0] < sch.antistokes_gate[1]
    assert sch.mean_storage_time_us == pytest.approx(5.6)
    assert sch.rephasing_region == (12600, 14600)


def test_config_text_round_trip(default_config):
    assert config_from_text(config_to_text(default_config)) == default_config

    custom = ExperimentConfig(
        write_power_uW=64.0,
        read_delay_us=15.0,
        gen_mode_width_ns=500.0,
        antistokes_gate_width_us=12.0,
        readout_budget=EfficiencyBudget(eta_rp=0.5, eta_reph=0.3, beta_br=0.7, beta_g=0.8),
        afc=AFCParams(d=4.0, finesse=2.0, d0=0.1, eta_afc_measured=None),
        rng_seed=987654321,
    )
    assert config_from_text(config_to_text(custom)) == custom


def test_config_parse_order_independent(default_config):
    lines = [l for l in config_to_text(default_config).splitlines() if l and not l.startswith("#")]
    rng = random.Random(7)
    for _ in range(3):
        rng.shuffle(lines)
        assert config_from_text("\n".join(lines)) == default_config


def test_unknown_key_is_error():
    with pytest.raises(ConfigError, match="unknown key"):
        config_from_text("write_power_uW = 16\nnot_a_field = 3\n")


def test_bad_value_is_error():
    with pytest.raises(ConfigError, match="bad value"):
        config_from_text("write_power_uW = sixteen\n")


def test_config_hash_tracks_content(default_config):
    assert config_hash(default_config) == config_hash(ExperimentConfig())
    assert config_hash(default_config) != config_hash(default_config.with_(write_power_uW=17.0))


def test_efficiency_budget_fields_validated():
    cfg = ExperimentConfig(readout_budget=EfficiencyBudget(eta_rp=1.5, eta_reph=0.36, beta_br=0.6, beta_g=0.76))
    assert any("eta_rp" in v for v in validate(cfg))


def test_afc_params_validated():
    cfg = ExperimentConfig(afc=AFCParams(d=5.4, finesse=0.5, d0=0.4))
    assert any("finesse" in v for v in validate(cfg))


def test_noise_fraction_sum_capped():
    cfg = ExperimentConfig(echo_leak_fraction=0.3, uncorrelated_noise_fraction_as=0.8)
    assert any("must be < 1" in v for v in validate(cfg))
