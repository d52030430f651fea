"""
Shared fixtures: a small sub-urban scenario that stays feasible end to end
"""

import copy
import json

import numpy as np
import pytest

from nib_planner.callbacks.execution_tracker import get_tracker
from nib_planner.config.settings import EXACT_CAP_ENV, LOG_LEVEL_ENV, OUTPUT_DIR_ENV, WORKERS_ENV
from nib_planner.scenario import UserPopulation, parse_config

# ~16 users on a 1 km disk, 100 kbps floors, half of them backhaul-dependent
UNIT_SCENARIO = {
    "name": "unit-suburban",
    "seed": 7,
    "haps": {"coverage_radius_m": 1000.0},
    "environment": {"preset": "sub-urban"},
    "rats": [
        {"id": "RAT-A", "carrier_freq_hz": 2.0e9, "bandwidth_hz": 10e6, "demand_prob": 0.5, "min_rate_bps": 1e5},
        {"id": "RAT-B", "carrier_freq_hz": 3.5e9, "bandwidth_hz": 20e6, "demand_prob": 0.5, "min_rate_bps": 1e5},
    ],
    "user_density_per_km2": 5.0,
    "backhaul_fraction": 0.5,
    "sweep": {"r_min_m": 300.0, "r_max_m": 900.0, "delta_r_m": 300.0, "tolerance_bps": 0.0},
}


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in (OUTPUT_DIR_ENV, LOG_LEVEL_ENV, WORKERS_ENV, EXACT_CAP_ENV):
        monkeypatch.delenv(name, raising=False)
    get_tracker().reset()
    yield
    get_tracker().reset()


@pytest.fixture
def scenario_data():
    return copy.deepcopy(UNIT_SCENARIO)


@pytest.fixture
def scenario(scenario_data):
    return parse_config(scenario_data)


@pytest.fixture
def infeasible_scenario(scenario_data):
    for rat in scenario_data["rats"]:
        rat["min_rate_bps"] = 1e9
    return parse_config(scenario_data)


@pytest.fixture
def scenario_file(tmp_path, scenario_data):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(scenario_data), encoding="utf-8")
    return path


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_population(positions, rat_index=None, backhaul=None, rat_ids=("RAT-A", "RAT-B")):
    """Hand-built users, all on RAT-A and backhaul-dependent unless told otherwise"""
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    k = positions.shape[0]
    return UserPopulation(
        positions=positions,
        rat_index=np.zeros(k, dtype=int) if rat_index is None else np.asarray(rat_index, dtype=int),
        backhaul_dependent=np.ones(k, dtype=bool) if backhaul is None else np.asarray(backhaul, dtype=bool),
        noise_figure_db=np.full(k, 7.0),
        rat_ids=list(rat_ids),
    )
