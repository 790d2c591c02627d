import json

import pytest

import uavabs


def test_coverage_and_slant():
    assert uavabs.coverage_span(10.0, 50.0, 60.0) == pytest.approx(25.7115, abs=1e-3)
    assert uavabs.slant_distance(35.0, 22.0) == pytest.approx(41.340, abs=1e-3)


def test_pattern_stats_default_array():
    s = uavabs.pattern_stats()
    assert s["peak_dbi"] == pytest.approx(16.46, abs=1.0)
    assert s["hpbw_a_deg"] == pytest.approx(12.69, abs=0.3)
    assert s["sll_db"] < -12.5


def test_null_of_line_array():
    assert uavabs.array_factor_abs(1, 4, 0.5, 30.0, 0.0) < 1e-9


def test_mcs_and_acoustics():
    assert uavabs.select_mcs(-100.0) == 0
    assert uavabs.mcs_rate_bps(30.0) > uavabs.mcs_rate_bps(5.0)
    assert uavabs.acoustic_level(10.0) == pytest.approx(66.0)
    assert uavabs.min_standoff(66.0) == pytest.approx(10.0, abs=0.05)


def test_bundled_scenarios_evaluate():
    names = uavabs.bundled_scenarios()
    assert "su_field_trial" in names
    res = uavabs.evaluate(uavabs.bundled_scenario_text("su_field_trial"))
    assert len(res["links"]) == 2
    assert res["aggregate_mbps"] == pytest.approx(2240.0, rel=0.15)


def test_run_is_deterministic_and_embeds_config():
    text = uavabs.bundled_scenario_text("su_field_trial")
    a = uavabs.run(text, seed=3)
    b = uavabs.run(text, seed=3)
    assert a == b
    mission = a["su_field_trial_mission.csv"]
    header = mission.splitlines()[0]
    assert header.startswith("# config=")
    assert json.loads(header[len("# config="):])["seed"] == 3


def test_resolve_config_fills_defaults():
    cfg = json.loads(uavabs.resolve_config("{}"))
    assert cfg["name"] == "scenario"
    assert cfg["array"]["n_azim"] == 8


def test_validation_errors_raise():
    with pytest.raises(ValueError, match="unknown key"):
        uavabs.resolve_config('{"colour": 1}')
    with pytest.raises(uavabs.ValidationError, match="no users"):
        uavabs.evaluate('{"uav": {"mounts": [{"id": "a"}]}}')
