import json
from pathlib import Path

import numpy as np
import pytest
import yaml
from numpy.testing import assert_array_equal
from scipy.stats import chisquare

from nib_planner.errors import ConfigError
from nib_planner.models.schemas import Environment, ScenarioConfig
from nib_planner.scenario import (
    config_hash,
    generate_users,
    load_config,
    parse_config,
    sample_population,
    substream,
    validate,
    with_overrides,
)

SHIPPED_SCENARIOS = sorted((Path(__file__).parent.parent / "scenarios").glob("*.json"))


def _fields(exc_info):
    return [v.field for v in exc_info.value.violations]


def test_default_scenario_is_valid():
    config = parse_config({})
    assert validate(config) == []
    assert config.r_max_m == config.haps.coverage_radius_m
    assert len(config.rats) == 4


def test_environment_preset_expands_and_explicit_keys_win():
    env = Environment(preset="urban", eta_nlos_db=25.0)
    assert env.label == "urban"
    assert env.eta_los_db == 1.0
    assert env.eta_nlos_db == 25.0
    assert env.excess_gap_db == -24.0


def test_unknown_preset_is_a_config_error():
    with pytest.raises(ConfigError) as exc_info:
        parse_config({"environment": {"preset": "lunar"}})
    assert "environment.preset" in _fields(exc_info)


def test_demand_pmf_must_sum_to_one(scenario_data):
    scenario_data["rats"][0]["demand_prob"] = 0.4
    with pytest.raises(ConfigError) as exc_info:
        parse_config(scenario_data)
    assert "rats.demand_prob" in _fields(exc_info)


def test_schema_errors_carry_dotted_paths():
    with pytest.raises(ConfigError) as exc_info:
        parse_config({"nib": {"n_antennas": 0}})
    assert "nib.n_antennas" in _fields(exc_info)
    assert exc_info.value.exit_code == 2


def test_cross_field_invariants(scenario_data):
    scenario_data["nib"] = {"altitude_bounds_m": [100.0, 30000.0], "hpbw_bounds_deg": [40.0, 20.0]}
    scenario_data["sweep"]["r_min_m"] = 1.0
    scenario_data["environment"] = {"eta_los_db": 5.0, "eta_nlos_db": 1.0}
    with pytest.raises(ConfigError) as exc_info:
        parse_config(scenario_data)
    fields = _fields(exc_info)
    assert "nib.altitude_bounds_m" in fields
    assert "nib.hpbw_bounds_deg" in fields
    assert "sweep.r_min_m" in fields
    assert "environment.eta_nlos_db" in fields


def test_r_max_beyond_coverage_radius(scenario_data):
    scenario_data["sweep"]["r_max_m"] = 5000.0
    with pytest.raises(ConfigError) as exc_info:
        parse_config(scenario_data)
    assert "sweep.r_max_m" in _fields(exc_info)


def test_power_for_unknown_rat(scenario_data):
    scenario_data["nib"] = {"tx_power_per_rat_w": {"RAT-Z": 5.0}}
    with pytest.raises(ConfigError) as exc_info:
        parse_config(scenario_data)
    assert "nib.tx_power_per_rat_w" in _fields(exc_info)


def test_load_json_and_yaml(tmp_path, scenario_data):
    json_path = tmp_path / "a.json"
    yaml_path = tmp_path / "a.yaml"
    json_path.write_text(json.dumps(scenario_data), encoding="utf-8")
    yaml_path.write_text(yaml.safe_dump(scenario_data), encoding="utf-8")
    assert config_hash(load_config(json_path)) == config_hash(load_config(yaml_path))


def test_missing_or_broken_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(broken)
    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(listing)


def test_overrides_and_hash(scenario):
    changed = with_overrides(scenario, seed=99, **{"haps.tx_power_w": 50.0})
    assert changed.seed == 99
    assert changed.haps.tx_power_w == 50.0
    assert scenario.seed == 7
    assert config_hash(changed) != config_hash(scenario)
    assert config_hash(scenario) == config_hash(ScenarioConfig.model_validate(scenario.model_dump()))


def test_overrides_are_revalidated(scenario):
    with pytest.raises(ConfigError):
        with_overrides(scenario, **{"sweep.r_min_m": 5000.0})


def test_time_of_day_power_schedule():
    config = parse_config({
        "haps": {
            "tx_power_w": 80.0,
            "power_schedule": {"mode": "time_of_day", "start_hour": 22, "hourly_tx_power_w": {"22": 10.0, "0": 30.0}},
        },
    })
    assert config.haps.tx_power_at(0) == 10.0
    assert config.haps.tx_power_at(1) == 80.0
    assert config.haps.tx_power_at(2) == 30.0


def test_substreams_are_reproducible_and_independent():
    a = substream(3, "fading", 0, 1).random(5)
    b = substream(3, "fading", 0, 1).random(5)
    c = substream(3, "fading", 0, 2).random(5)
    d = substream(3, "backhaul", 0, 1).random(5)
    assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)
    with pytest.raises(KeyError):
        substream(3, "weather")


def test_population_is_seeded_and_inside_the_disk(scenario):
    first = sample_population(scenario)
    second = sample_population(scenario)
    assert first.size > 0
    assert_array_equal(first.positions, second.positions)
    assert_array_equal(first.rat_index, second.rat_index)
    radius = np.hypot(first.positions[:, 0], first.positions[:, 1])
    assert np.all(radius <= scenario.haps.coverage_radius_m)
    assert set(first.rat_index.tolist()) <= {0, 1}

    other = sample_population(with_overrides(scenario, seed=8))
    assert other.size != first.size or not np.array_equal(other.positions, first.positions)


def test_backhaul_fraction_extremes(scenario):
    none = sample_population(with_overrides(scenario, backhaul_fraction=0.0))
    every = sample_population(with_overrides(scenario, backhaul_fraction=1.0))
    assert not none.backhaul_dependent.any()
    assert every.backhaul_dependent.all()


def test_rat_demand_follows_the_pmf():
    config = parse_config({"haps": {"coverage_radius_m": 5000.0}, "user_density_per_km2": 100.0})
    population = sample_population(config)
    probs = np.array([rat.demand_prob for rat in config.rats])
    counts = np.bincount(population.rat_index, minlength=probs.size)
    expected = probs / probs.sum() * population.size
    assert chisquare(counts, f_exp=expected).pvalue > 1e-3


def test_one_hot_demand_pmf():
    rats = [rat.model_dump() for rat in ScenarioConfig().rats]
    for rat, prob in zip(rats, [0.0, 0.0, 0.0, 1.0]):
        rat["demand_prob"] = prob
    population = sample_population(parse_config({"rats": rats, "user_density_per_km2": 5.0}))
    assert population.size > 0
    assert np.all(population.rat_index == 3)


def test_population_size_tracks_density():
    config = parse_config({"haps": {"coverage_radius_m": 5000.0}, "user_density_per_km2": 100.0})
    counts = [sample_population(config, substream(0, "users", t)).size for t in range(20)]
    expected = 100.0 * np.pi * 25.0
    assert abs(np.mean(counts) - expected) < 5.0 * np.sqrt(expected / 20.0)


def test_zero_density_is_degenerate(scenario):
    population = sample_population(with_overrides(scenario, user_density_per_km2=0.0))
    assert population.size == 0
    assert population.degenerate
    assert generate_users(with_overrides(scenario, user_density_per_km2=0.0)) == []


def test_ground_users_round_trip(scenario):
    population = sample_population(scenario)
    users = generate_users(scenario)
    assert [u.id for u in users] == list(range(population.size))
    rebuilt = type(population).from_ground_users(users, scenario.rat_ids())
    assert_array_equal(rebuilt.positions, population.positions)
    assert_array_equal(rebuilt.backhaul_dependent, population.backhaul_dependent)


@pytest.mark.parametrize("path", SHIPPED_SCENARIOS, ids=lambda p: p.stem)
def test_shipped_scenarios_are_valid(path):
    config = load_config(path)
    assert validate(config) == []
    assert config.sweep.r_min_m <= config.r_max_m
