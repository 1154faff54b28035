"""Smoke tests for the Python bindings."""

import math

import pytest

import bilatsim


def test_mrs_and_welfare_values():
    assert bilatsim.compute_mrs(1, 2, 5.0, 10.0) == pytest.approx(1.0)
    assert bilatsim.compute_mrs(1, 2, 2.0, 8.0) == pytest.approx(2.0)
    assert bilatsim.compute_welfare(1, 1, 4.0, 9.0) == pytest.approx(6.0)
    assert bilatsim.compute_welfare(1, 3, 16.0, 81.0) == pytest.approx(54.0)
    assert bilatsim.bargain_price(4.0, 1.0) == pytest.approx(2.0)
    assert bilatsim.bargain_price(9.0, 4.0) == pytest.approx(6.0)


def test_mrs_rejects_zero_bonds():
    with pytest.raises(ValueError):
        bilatsim.compute_mrs(1, 1, 0.0, 5.0)


def test_trade_session_converges_and_conserves():
    a = bilatsim.AgentState()
    a.id = 0
    a.accum_bonds, a.accum_cash = 2.0, 8.0
    b = bilatsim.AgentState()
    b.id = 1
    b.accum_bonds, b.accum_cash = 8.0, 2.0

    records = bilatsim.execute_trade_session(a, b, 0)
    assert len(records) == 3
    assert all(r.buyer_id == 0 for r in records)
    assert a.accum_bonds + b.accum_bonds == pytest.approx(10.0)
    assert a.accum_cash + b.accum_cash == pytest.approx(10.0)
    assert a.accum_bonds == pytest.approx(5.0)
    assert b.accum_cash == pytest.approx(5.0)


def tiny_config():
    cfg = bilatsim.SimConfig()
    cfg.grid_width = 10
    cfg.grid_height = 10
    cfg.n_agents = 3
    cfg.vision_range = bilatsim.IntRange(1, 4)
    cfg.metabolism_range_bonds = bilatsim.IntRange(1, 2)
    cfg.metabolism_range_cash = bilatsim.IntRange(1, 2)
    cfg.endowment_range_bonds = bilatsim.IntRange(8, 16)
    cfg.endowment_range_cash = bilatsim.IntRange(8, 16)
    cfg.max_steps = 40
    cfg.replications = 2
    cfg.seed = 1234
    return cfg


def test_run_is_deterministic():
    cfg = tiny_config()
    a = bilatsim.run(cfg, 0)
    b = bilatsim.run(cfg, 0)
    assert a.total_actions == b.total_actions
    assert a.trading_actions == b.trading_actions
    assert a.population_trajectory == b.population_trajectory
    assert a.trade_fraction == b.trade_fraction
    assert a.run_seed == b.run_seed
    assert len(a.population_trajectory) == a.steps_executed + 1


def test_run_batch_matches_individual_runs():
    cfg = tiny_config()
    batch = bilatsim.run_batch(cfg, 2)
    assert len(batch) == 2
    solo = bilatsim.run(cfg, 1, keep_trade_log=False)
    assert batch[1].total_actions == solo.total_actions
    assert batch[1].population_trajectory == solo.population_trajectory


def test_builtin_suite_shape():
    suite = bilatsim.builtin_scenarios()
    names = {spec.name for spec in suite}
    assert len(suite) == 9
    assert "H4-GOLDILOCKS" in names
    h4 = next(s for s in suite if s.name == "H4-GOLDILOCKS")
    assert h4.config.replications == 100
    assert h4.config.vision_range == bilatsim.IntRange(50, 50)


def test_config_json_round_trip():
    cfg = tiny_config()
    text = bilatsim.serialize_config(cfg)
    parsed = bilatsim.parse_config(text)
    assert parsed == cfg


def test_parse_config_rejects_unknown_keys():
    with pytest.raises(ValueError):
        bilatsim.parse_config('{"not_a_key": 1}')


def test_detect_collapse():
    assert bilatsim.detect_collapse([4, 4, 3, 1, 0]) == 3
    assert bilatsim.detect_collapse([4] * 100) is None


def test_run_scenario_aggregates():
    spec = next(s for s in bilatsim.builtin_scenarios() if s.name == "H1-HOMOG")
    result = bilatsim.run_scenario(spec)
    assert result.replications == spec.config.replications
    assert 0.0 <= result.mean_trade_fraction <= 1.0
    assert math.isfinite(result.median_collapse_step)
    assert result.collapse_share > 0.5  # the homogeneous population starves
