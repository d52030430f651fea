import json

import pandas as pd
import pytest

from nib_planner.core import PlanningOrchestrator, run_planning, sweep
from nib_planner.errors import ArtifactIOError
from nib_planner.reporting import (
    ARTIFACTS_FILE,
    MANIFEST_FILE,
    load_artifacts,
    load_manifest,
    persist_run,
    persist_stage,
    persist_sweep,
    persist_users,
    write_report,
    write_table,
)
from nib_planner.scenario import config_hash, sample_population


@pytest.fixture
def run_result(scenario):
    return run_planning(scenario)


def test_persist_run_writes_every_table(run_result, tmp_path):
    files = persist_run(run_result, tmp_path)
    assert files[-1] == MANIFEST_FILE
    for name in ("epochs.csv", "nibs.csv", "metrics.csv", "users.csv", "plan.csv",
                 "association.csv", "noma.csv", "allocation.csv", "sca_trace.csv", ARTIFACTS_FILE):
        assert (tmp_path / name).exists(), name
    manifest = load_manifest(tmp_path)
    assert manifest.files == sorted(files[:-1])
    assert manifest.config_hash == config_hash(run_result.artifacts.config)

    epochs = pd.read_csv(tmp_path / "epochs.csv")
    assert len(epochs) == len(run_result.artifacts.epochs)
    allocation = pd.read_csv(tmp_path / "allocation.csv")
    assert len(allocation) == run_result.best_state.population.size
    assert (allocation["power"] <= 1.0).all()


def test_artifacts_round_trip(run_result, tmp_path):
    persist_run(run_result, tmp_path)
    loaded = load_artifacts(tmp_path)
    original = run_result.artifacts
    assert loaded.best_epoch == original.best_epoch
    assert loaded.best_sum_rate_access_bps == original.best_sum_rate_access_bps
    assert loaded.nibs == original.nibs
    assert loaded.users == original.users
    assert config_hash(loaded.config) == config_hash(original.config)
    assert loaded.manifest.files
    assert load_artifacts(tmp_path / ARTIFACTS_FILE).best_epoch == original.best_epoch


def test_channel_dump(run_result, tmp_path):
    files = persist_run(run_result, tmp_path, dump_channels=True)
    assert "access_channels.csv" in files
    assert "backhaul_channels.csv" in files
    backhaul = pd.read_csv(tmp_path / "backhaul_channels.csv")
    assert len(backhaul) == len(run_result.artifacts.nibs)


def test_tables_are_byte_identical_across_runs(scenario, tmp_path):
    persist_run(run_planning(scenario), tmp_path / "a")
    persist_run(run_planning(scenario), tmp_path / "b")
    for name in ("epochs.csv", "allocation.csv", "noma.csv", ARTIFACTS_FILE):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_json_tables(run_result, tmp_path):
    files = persist_run(run_result, tmp_path, fmt="json")
    assert "epochs.json" in files
    records = json.loads((tmp_path / "nibs.json").read_text(encoding="utf-8"))
    assert len(records) == len(run_result.artifacts.nibs)
    with pytest.raises(ValueError):
        write_table(pd.DataFrame({"a": [1]}), tmp_path, "bad", fmt="xml")


def test_missing_or_broken_artifacts(tmp_path):
    with pytest.raises(ArtifactIOError):
        load_artifacts(tmp_path)
    (tmp_path / ARTIFACTS_FILE).write_text('{"epochs": "nope"}', encoding="utf-8")
    with pytest.raises(ArtifactIOError):
        load_artifacts(tmp_path)
    with pytest.raises(ArtifactIOError):
        load_manifest(tmp_path)


def test_write_report_from_artifacts(run_result, tmp_path):
    persist_run(run_result, tmp_path / "run")
    artifacts = load_artifacts(tmp_path / "run")
    files = write_report(artifacts, tmp_path / "report")
    assert sorted(files) == ["epochs.csv", "metrics.csv", "nibs.csv", "users.csv"]
    users = pd.read_csv(tmp_path / "report" / "users.csv")
    assert (users["nib"] >= 0).all()


def test_staged_and_user_outputs(scenario, tmp_path):
    orchestrator = PlanningOrchestrator(scenario)
    state = orchestrator.run_epoch(0, scenario.sweep.r_min_m, stop_after="association")
    files = persist_stage(state, scenario, tmp_path / "stage", "associate", nibs=orchestrator.nib_nodes(state))
    assert {"users.csv", "plan.csv", "association.csv", "nibs.csv", MANIFEST_FILE} == set(files)
    assert load_manifest(tmp_path / "stage").command == "associate"

    files = persist_users(sample_population(scenario), scenario, tmp_path / "users")
    assert files == ["users.csv", MANIFEST_FILE]


def test_persist_sweep(scenario, tmp_path):
    result = sweep(scenario, "density", [5.0], trials=1, workers=1)
    files = persist_sweep(result, scenario, tmp_path)
    assert files[:2] == ["sweep_density_trials.csv", "sweep_density.csv"]
    summary = pd.read_csv(tmp_path / "sweep_density.csv")
    assert "sum_rate_access_bps_mean" in summary.columns
