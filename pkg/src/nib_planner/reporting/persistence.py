"""
Artifact Persistence
Writes run state as JSON, plot-ready tables as CSV (or JSON records) and a run
manifest; reloads artifacts for the report command
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from nib_planner import __version__
from nib_planner.channel import linear_to_db
from nib_planner.core.orchestrator import EpochState, RunResult
from nib_planner.core.sweep import SweepResult
from nib_planner.errors import ArtifactIOError
from nib_planner.models.schemas import EpochSummary, NibNode, RunArtifacts, RunManifest, ScenarioConfig
from nib_planner.scenario import UserPopulation, config_hash

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.10g"
ARTIFACTS_FILE = "artifacts.json"
MANIFEST_FILE = "manifest.json"


# ============================================================================
# Table builders
# ============================================================================

def epochs_table(epochs: List[EpochSummary]) -> pd.DataFrame:
    """One row per planning epoch with its metrics flattened"""
    rows = []
    for epoch in epochs:
        row = epoch.model_dump(exclude={"metrics", "infeasibility", "mean_sinr_db", "stages"})
        for rule, value in sorted(epoch.mean_sinr_db.items()):
            row[f"mean_sinr_db_{rule}"] = value
        if epoch.metrics is not None:
            metrics = epoch.metrics.model_dump(exclude={"seed", "trials", "config_hash"})
            row.update({f"metric_{key}": value for key, value in metrics.items()})
        row["infeasible_stage"] = epoch.infeasibility.stage if epoch.infeasibility else ""
        row["infeasible_reason"] = epoch.infeasibility.reason if epoch.infeasibility else ""
        rows.append(row)
    return pd.DataFrame(rows)


def users_table(population: UserPopulation) -> pd.DataFrame:
    return pd.DataFrame({
        "user": population.ids,
        "x_m": population.positions[:, 0],
        "y_m": population.positions[:, 1],
        "rat": [population.rat_ids[i] for i in population.rat_index],
        "noise_figure_db": population.noise_figure_db,
        "backhaul_dependent": population.backhaul_dependent,
    })


def plan_table(state: EpochState) -> pd.DataFrame:
    """Deployment disks of the epoch, with the NIB id each became (-1 when released)"""
    plan = state.plan
    nib_id = np.full(plan.n_nibs, -1, dtype=int)
    if state.deployed_ids is not None:
        nib_id[state.deployed_ids] = np.arange(state.deployed_ids.size)
    return pd.DataFrame({
        "disk": np.arange(plan.n_nibs),
        "x_m": plan.centers[:, 0],
        "y_m": plan.centers[:, 1],
        "radius_m": plan.radius,
        "center_user": plan.center_ids if plan.center_ids.size == plan.n_nibs else -1,
        "method": plan.method,
        "nib": nib_id,
    })


def nibs_table(nibs: List[NibNode]) -> pd.DataFrame:
    rows = []
    for node in nibs:
        row = node.model_dump(exclude={"center", "tx_power_per_rat_w"})
        row["x_m"], row["y_m"] = node.center
        rows.append(row)
    return pd.DataFrame(rows)


def association_table(state: EpochState) -> pd.DataFrame:
    """Serving NIB per user under the configured rule, plus the baseline rules' picks"""
    population, association = state.population, state.association
    frame = users_table(population)
    frame["nib"] = association.nib_of_user
    frame["distance_m"] = association.distance_m
    frame["sinr_db"] = linear_to_db(np.maximum(association.sinr, 1e-300))
    for rule, result in state.rule_maps.items():
        # baseline picks use deployment disk ids
        frame[f"disk_{rule}"] = result.nib_of_user
        frame[f"sinr_db_{rule}"] = linear_to_db(np.maximum(result.sinr, 1e-300))
    return frame


def allocation_table(state: EpochState) -> pd.DataFrame:
    """Power coefficients and idealized/actual rates per user, NUPA and UPA"""
    problem, allocation, rates = state.problem, state.allocation, state.rates
    return pd.DataFrame({
        "user": problem.users,
        "nib": problem.cell_nib[problem.cell],
        "rat": [state.population.rat_ids[i] for i in state.population.rat_index[problem.users]],
        "backhaul_dependent": problem.backhaul_dependent,
        "gain": problem.gain,
        "power": allocation.power,
        "rate_bps": allocation.rates_bps,
        "rate_actual_bps": rates.actual_bps,
        "sinr_db": linear_to_db(np.maximum(rates.ideal_sinr, 1e-300)),
        "sinr_actual_db": linear_to_db(np.maximum(rates.actual_sinr, 1e-300)),
        "min_rate_bps": problem.min_rate_bps,
        "qos_met": allocation.qos_met,
        "upa_power": state.upa.power,
        "upa_rate_bps": state.upa.rates_bps,
    })


def sca_trace_table(state: EpochState) -> pd.DataFrame:
    trace = state.allocation.objective_trace
    return pd.DataFrame({"iteration": np.arange(len(trace)), "sum_rate_bps": trace})


def noma_table(state: EpochState) -> pd.DataFrame:
    """Backhaul split in SIC order (weakest NIB first) with the OFDMA rate per NIB"""
    noma = state.noma
    return pd.DataFrame({
        "sic_position": np.arange(noma.n_nibs),
        "nib": noma.order,
        "aleph": noma.aleph,
        "fraction_hat": noma.fractions_hat,
        "fraction": noma.fractions,
        "served": noma.served,
        "sinr_db": linear_to_db(np.maximum(noma.sinr, 1e-300)),
        "rate_bps": noma.rates_bps,
        "closed_form_rate_bps": noma.closed_form_rates_bps,
        "oma_rate_bps": state.oma_rates_bps[noma.order],
    })


def metrics_table(epochs: List[EpochSummary], best_epoch: Optional[int]) -> pd.DataFrame:
    """Metric bundle of the best epoch"""
    for epoch in epochs:
        if epoch.iteration == best_epoch and epoch.metrics is not None:
            row = epoch.metrics.model_dump()
            row["iteration"] = epoch.iteration
            row["radius_m"] = epoch.radius_m
            return pd.DataFrame([row])
    return pd.DataFrame()


def access_channel_table(state: EpochState) -> pd.DataFrame:
    budget, gains = state.access_budget, state.access_gains
    frame = pd.DataFrame({
        "user": state.population.ids,
        "nib": state.association.nib_of_user,
        "distance_m": budget.distance_m,
        "elevation_deg": budget.elevation_deg,
        "off_axis_deg": budget.off_axis_deg,
        "beam_gain_db": linear_to_db(budget.beam_gain),
        "path_loss_db": linear_to_db(budget.path_loss),
    })
    for m in range(gains.shape[1]):
        frame[f"gain_sq_ant{m}"] = np.abs(gains[:, m]) ** 2
    return frame


def backhaul_channel_table(state: EpochState) -> pd.DataFrame:
    channel = state.backhaul
    return pd.DataFrame({
        "nib": np.arange(np.size(channel.aleph)),
        "aleph": np.atleast_1d(channel.aleph),
        "haps_gain_db": np.atleast_1d(linear_to_db(channel.haps_beam_gain)),
        "fspl_db": np.atleast_1d(linear_to_db(channel.fspl)),
        "slant_distance_m": np.atleast_1d(channel.slant_distance_m),
        "fading_power": np.atleast_1d(channel.fading.power),
    })


def state_tables(state: EpochState, dump_channels: bool = False) -> Dict[str, pd.DataFrame]:
    """Every table the stages of an epoch support"""
    tables: Dict[str, pd.DataFrame] = {}
    if state.population is not None:
        tables["users"] = users_table(state.population)
    if state.plan is not None:
        tables["plan"] = plan_table(state)
    if state.association is not None:
        tables["association"] = association_table(state)
    if state.noma is not None:
        tables["noma"] = noma_table(state)
    if state.allocation is not None:
        tables["allocation"] = allocation_table(state)
        tables["sca_trace"] = sca_trace_table(state)
    if dump_channels and state.access_gains is not None:
        tables["access_channels"] = access_channel_table(state)
        tables["backhaul_channels"] = backhaul_channel_table(state)
    return tables


# ============================================================================
# Writers
# ============================================================================

def _ensure_dir(outdir: Union[str, Path]) -> Path:
    path = Path(outdir)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ArtifactIOError(path, f"cannot create directory: {exc}") from exc
    return path


def write_table(frame: pd.DataFrame, outdir: Union[str, Path], name: str, fmt: str = "csv") -> str:
    """
    Write one table

    Args:
        frame: Table
        outdir: Target directory (created if missing)
        name: File stem
        fmt: 'csv' (fixed float format) or 'json' (records)

    Returns:
        File name written
    """
    path = _ensure_dir(outdir) / f"{name}.{fmt}"
    try:
        if fmt == "csv":
            frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        elif fmt == "json":
            frame.to_json(path, orient="records", double_precision=10, indent=2)
        else:
            raise ValueError(f"unknown table format '{fmt}'")
    except OSError as exc:
        raise ArtifactIOError(path, f"write failed: {exc}") from exc
    logger.debug(f"Wrote {path} ({len(frame)} rows)")
    return path.name


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ArtifactIOError(path, f"write failed: {exc}") from exc


def write_manifest(manifest: RunManifest, outdir: Union[str, Path]) -> str:
    path = _ensure_dir(outdir) / MANIFEST_FILE
    _write_text(path, manifest.model_dump_json(indent=2) + "\n")
    return path.name


def _write_tables(tables: Dict[str, pd.DataFrame], outdir: Path, fmt: str) -> List[str]:
    return [write_table(frame, outdir, name, fmt) for name, frame in tables.items()]


def persist_run(
    result: RunResult,
    outdir: Union[str, Path],
    fmt: str = "csv",
    dump_channels: bool = False,
) -> List[str]:
    """
    Write a full planning run

    Args:
        result: Output of run_planning
        outdir: Target directory (created if missing)
        fmt: Table format
        dump_channels: Also write per-link channel tables of the best epoch

    Returns:
        Names of the files written, manifest last
    """
    outdir = _ensure_dir(outdir)
    artifacts = result.artifacts
    tables = {"epochs": epochs_table(artifacts.epochs), "nibs": nibs_table(artifacts.nibs)}
    tables["metrics"] = metrics_table(artifacts.epochs, artifacts.best_epoch)
    if result.best_state is not None:
        tables.update(state_tables(result.best_state, dump_channels))
    files = _write_tables(tables, outdir, fmt)

    manifest = artifacts.manifest.model_copy(update={"files": sorted(files + [ARTIFACTS_FILE])})
    artifacts = artifacts.model_copy(update={"manifest": manifest})
    _write_text(outdir / ARTIFACTS_FILE, artifacts.model_dump_json(indent=2) + "\n")
    files.append(ARTIFACTS_FILE)
    files.append(write_manifest(manifest, outdir))
    logger.info(f"Run artifacts written to {outdir} ({len(files)} files)")
    return files


def persist_stage(
    state: EpochState,
    config: ScenarioConfig,
    outdir: Union[str, Path],
    command: str,
    fmt: str = "csv",
    dump_channels: bool = False,
    nibs: Optional[List[NibNode]] = None,
) -> List[str]:
    """Write the tables of a partial (staged) epoch plus a manifest"""
    outdir = _ensure_dir(outdir)
    tables = state_tables(state, dump_channels)
    if nibs:
        tables["nibs"] = nibs_table(nibs)
    files = _write_tables(tables, outdir, fmt)
    manifest = RunManifest(
        config_hash=config_hash(config), seed=config.seed, version=__version__, command=command, files=sorted(files),
    )
    files.append(write_manifest(manifest, outdir))
    return files


def persist_users(
    population: UserPopulation,
    config: ScenarioConfig,
    outdir: Union[str, Path],
    fmt: str = "csv",
) -> List[str]:
    outdir = _ensure_dir(outdir)
    files = [write_table(users_table(population), outdir, "users", fmt)]
    manifest = RunManifest(
        config_hash=config_hash(config), seed=config.seed, version=__version__, command="generate-users", files=files,
    )
    files.append(write_manifest(manifest, outdir))
    return files


def persist_sweep(
    result: SweepResult,
    config: ScenarioConfig,
    outdir: Union[str, Path],
    fmt: str = "csv",
) -> List[str]:
    """Write per-trial rows and the aggregated table of a sweep"""
    outdir = _ensure_dir(outdir)
    stem = f"sweep_{result.axis}"
    files = [
        write_table(result.trials, outdir, f"{stem}_trials", fmt),
        write_table(result.summary, outdir, stem, fmt),
    ]
    manifest = RunManifest(
        config_hash=config_hash(config), seed=config.seed, version=__version__, command="sweep", files=sorted(files),
    )
    files.append(write_manifest(manifest, outdir))
    logger.info(f"Sweep tables written to {outdir}")
    return files


# ============================================================================
# Readers
# ============================================================================

def load_artifacts(path: Union[str, Path]) -> RunArtifacts:
    """
    Reload the artifacts of a run

    Args:
        path: Run directory or the artifacts JSON file itself

    Returns:
        RunArtifacts

    Raises:
        ArtifactIOError: If the file is missing or does not hold run artifacts
    """
    path = Path(path)
    if path.is_dir():
        path = path / ARTIFACTS_FILE
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ArtifactIOError(path, f"cannot read: {exc}") from exc
    try:
        return RunArtifacts.model_validate_json(text)
    except ValidationError as exc:
        raise ArtifactIOError(path, f"not a run artifact file ({exc.error_count()} error(s))") from exc


def load_manifest(path: Union[str, Path]) -> RunManifest:
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_FILE
    try:
        return RunManifest.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except OSError as exc:
        raise ArtifactIOError(path, f"cannot read: {exc}") from exc
    except (ValueError, ValidationError) as exc:
        raise ArtifactIOError(path, f"invalid manifest: {exc}") from exc


def write_report(artifacts: RunArtifacts, outdir: Union[str, Path], fmt: str = "csv") -> List[str]:
    """Regenerate the epoch, NIB, user and metric tables from saved artifacts"""
    outdir = _ensure_dir(outdir)
    tables = {
        "epochs": epochs_table(artifacts.epochs),
        "nibs": nibs_table(artifacts.nibs),
        "metrics": metrics_table(artifacts.epochs, artifacts.best_epoch),
    }
    if artifacts.users:
        tables["users"] = pd.DataFrame([
            {
                "user": u.id, "x_m": u.position[0], "y_m": u.position[1], "rat": u.rat,
                "backhaul_dependent": u.backhaul_dependent,
                "nib": -1 if u.assoc_nib is None else u.assoc_nib, "power": u.power_coeff,
            }
            for u in artifacts.users
        ])
    return _write_tables(tables, outdir, fmt)
