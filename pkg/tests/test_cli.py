import json

import pytest

from nib_planner.config.settings import OUTPUT_DIR_ENV
from nib_planner.main import build_parser, main
from nib_planner.reporting import ARTIFACTS_FILE, MANIFEST_FILE


def _cli(config, out, *command):
    return main(["--config", str(config), "--out", str(out), *command])


def test_validate(scenario_file, tmp_path, capsys):
    assert _cli(scenario_file, tmp_path, "validate") == 0
    assert "unit-suburban" in capsys.readouterr().out


def test_invalid_scenario_exits_with_2(tmp_path, scenario_data, capsys):
    scenario_data["rats"][0]["demand_prob"] = 0.9
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(scenario_data), encoding="utf-8")
    assert _cli(path, tmp_path, "validate") == 2
    assert "rats.demand_prob" in capsys.readouterr().err


def test_missing_config_exits_with_2(tmp_path):
    assert main(["--out", str(tmp_path), "validate"]) == 2


def test_run_then_report(scenario_file, tmp_path):
    out = tmp_path / "run"
    assert _cli(scenario_file, out, "run") == 0
    assert (out / ARTIFACTS_FILE).exists()
    assert (out / MANIFEST_FILE).exists()
    (out / "epochs.csv").unlink()
    assert main(["--out", str(out), "report"]) == 0
    assert (out / "epochs.csv").exists()


def test_infeasible_run_exits_with_3(tmp_path, scenario_data, capsys):
    for rat in scenario_data["rats"]:
        rat["min_rate_bps"] = 1e9
    path = tmp_path / "tight.json"
    path.write_text(json.dumps(scenario_data), encoding="utf-8")
    assert _cli(path, tmp_path / "out", "run") == 3
    assert "Infeasible" in capsys.readouterr().err


def test_report_without_artifacts_exits_with_4(tmp_path):
    assert main(["--out", str(tmp_path), "report"]) == 4


def test_staged_commands(scenario_file, tmp_path):
    assert _cli(scenario_file, tmp_path / "users", "generate-users") == 0
    assert (tmp_path / "users" / "users.csv").exists()
    assert _cli(scenario_file, tmp_path / "deploy", "deploy", "--method", "gdc-greedy") == 0
    assert (tmp_path / "deploy" / "plan.csv").exists()
    assert _cli(scenario_file, tmp_path / "associate", "associate", "--rule", "nearest") == 0
    assert (tmp_path / "associate" / "association.csv").exists()
    assert _cli(scenario_file, tmp_path / "allocate", "--format", "json", "allocate") == 0
    assert (tmp_path / "allocate" / "allocation.json").exists()


def test_sweep_command(scenario_file, tmp_path):
    code = _cli(scenario_file, tmp_path, "--trials", "1", "sweep", "--axis", "density", "--values", "3", "5")
    assert code == 0
    assert (tmp_path / "sweep_density.csv").exists()


def test_sweep_with_unknown_stage_exits_with_2(scenario_file, tmp_path, capsys):
    code = _cli(scenario_file, tmp_path, "--trials", "1", "sweep", "--axis", "density", "--values", "3", "--stop-after", "launch")
    assert code == 2
    assert "sweep.stop_after" in capsys.readouterr().err
    assert not list(tmp_path.glob("sweep_*"))


def test_output_directory_from_environment(scenario_file, tmp_path, monkeypatch):
    target = tmp_path / "from-env"
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(target))
    assert _cli(scenario_file, tmp_path / "ignored", "generate-users") == 0
    assert (target / "users.csv").exists()
    assert not (tmp_path / "ignored").exists()


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])
