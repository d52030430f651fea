"""
Parameter Sweeps
Monte Carlo trials per sweep point, run on a thread pool and aggregated with pandas
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, get_args

import numpy as np
import pandas as pd

from nib_planner.channel import db_to_linear, dbw_to_watts, haps_fspl, haps_peak_gain, noise_power_w
from nib_planner.config.settings import get_worker_count
from nib_planner.config.stage_names import STAGE_DISPLAY_NAMES
from nib_planner.core.orchestrator import PlanningOrchestrator
from nib_planner.errors import ConfigError
from nib_planner.models.schemas import ConfigViolation, ScenarioConfig, SweepAxis
from nib_planner.scenario import with_overrides

logger = logging.getLogger(__name__)

SWEEP_AXES = get_args(SweepAxis)
KEY_COLUMNS = ["axis", "value", "trial"]

# Trial columns; rate columns stay NaN for infeasible trials so means cover feasible ones only
TRIAL_COLUMNS = [
    "feasible",
    "radius_m",
    "n_users",
    "n_nibs",
    "n_nibs_hex",
    "tx_power_haps_w",
    "sum_rate_access_bps",
    "sum_rate_access_actual_bps",
    "sum_rate_backhaul_bps",
    "aee_backhaul",
    "se_avg_backhaul",
    "ase_backhaul_per_km2",
    "aee_access",
    "se_avg_access",
    "jain",
    "upa_sum_rate_access_bps",
    "upa_jain",
    "oma_sum_rate_backhaul_bps",
    "oma_aee_backhaul",
    "oma_ase_backhaul_per_km2",
    "noma_served",
    "sca_iterations",
    "mean_sinr_db_max-sinr",
    "mean_sinr_db_nearest",
    "mean_sinr_db_random",
]


@dataclass
class SweepResult:
    """Per-trial rows and the per-point aggregate (mean, std, count)"""

    axis: str
    values: List[float]
    trials: pd.DataFrame
    summary: pd.DataFrame


def transmit_snr_power(config: ScenarioConfig, snr_db: float) -> float:
    """
    HAPS power giving a boresight transmit SNR at the lowest NIB altitude

    P_H = snr sigma^2 L_fs(H - H_min) / G_0
    """
    haps = config.haps
    distance = haps.altitude_m - config.nib.altitude_bounds_m[0]
    noise = noise_power_w(haps.bandwidth_hz, config.nib.noise_figure_db)
    loss = haps_fspl(distance, haps.wavelength_m)
    return float(db_to_linear(snr_db)) * noise * loss / haps_peak_gain(haps.aperture_efficiency, haps.hpbw_deg)


def apply_axis(config: ScenarioConfig, axis: str, value: float) -> ScenarioConfig:
    """
    Scenario for one sweep point

    Args:
        config: Base scenario
        axis: coverage_radius (m), tx_power (dBW per RAT), transmit_snr (dB),
            n_antennas or density (users/km^2)
        value: Point on the axis

    Returns:
        Re-validated ScenarioConfig

    Raises:
        ConfigError: For an unknown axis or a value the scenario rejects
    """
    if axis == "coverage_radius":
        updates = {"haps.coverage_radius_m": float(value), "sweep.r_max_m": None}
    elif axis == "tx_power":
        updates = {"nib.default_tx_power_w": float(dbw_to_watts(value)), "nib.tx_power_per_rat_w": {}}
    elif axis == "transmit_snr":
        updates = {
            "haps.tx_power_w": transmit_snr_power(config, value),
            "haps.power_schedule.mode": "constant",
        }
    elif axis == "n_antennas":
        if float(value) != int(value):
            raise ConfigError([ConfigViolation(field="nib.n_antennas", message=f"{value} is not an integer")])
        updates = {"nib.n_antennas": int(value)}
    elif axis == "density":
        updates = {"user_density_per_km2": float(value)}
    else:
        raise ConfigError([ConfigViolation(field="sweep.axis", message=f"unknown axis '{axis}', expected {SWEEP_AXES}")])
    return with_overrides(config, **updates)


def run_trial(
    config: ScenarioConfig,
    axis: str,
    value: float,
    trial: int,
    stop_after: Optional[str] = None,
) -> Dict[str, Any]:
    """One epoch at r_min for one Monte Carlo trial, flattened into a row"""
    orchestrator = PlanningOrchestrator(config, trial=trial)
    state = orchestrator.run_epoch(0, config.sweep.r_min_m, stop_after=stop_after)
    summary = orchestrator.summarize(state)

    row: Dict[str, Any] = {"axis": axis, "value": float(value), "trial": trial}
    row.update({column: np.nan for column in TRIAL_COLUMNS})
    flat = summary.model_dump(exclude={"metrics", "infeasibility", "mean_sinr_db", "stages"})
    for column in ("radius_m", "n_users", "n_nibs", "n_nibs_hex", "tx_power_haps_w"):
        row[column] = flat[column]
    row["feasible"] = float(summary.feasible)
    for rule, sinr in summary.mean_sinr_db.items():
        row[f"mean_sinr_db_{rule}"] = sinr
    if summary.feasible and summary.metrics is not None:
        metrics = summary.metrics.model_dump()
        for column in TRIAL_COLUMNS:
            if column in metrics:
                row[column] = metrics[column]
        for column in ("upa_sum_rate_access_bps", "upa_jain", "oma_sum_rate_backhaul_bps",
                       "oma_aee_backhaul", "oma_ase_backhaul_per_km2", "noma_served", "sca_iterations"):
            row[column] = flat[column]
    return row


def aggregate(trials: pd.DataFrame) -> pd.DataFrame:
    """Mean, standard deviation and count of every trial column per sweep point"""
    grouped = trials.groupby(["axis", "value"], sort=False)[TRIAL_COLUMNS].agg(["mean", "std", "count"])
    grouped.columns = [f"{column}_{stat}" for column, stat in grouped.columns]
    return grouped.reset_index()


def sweep(
    config: ScenarioConfig,
    axis: str,
    values: Sequence[float],
    trials: Optional[int] = None,
    workers: Optional[int] = None,
    stop_after: Optional[str] = None,
) -> SweepResult:
    """
    Monte Carlo sweep of one scenario parameter

    Every trial runs a single epoch at r_min with its own random substreams, so
    results depend only on (config, seed) and not on thread scheduling.

    Args:
        config: Base scenario
        axis: One of SWEEP_AXES
        values: Points on the axis
        trials: Trials per point (default: config.monte_carlo.trials)
        workers: Threads (default: NIB_PLANNER_WORKERS or config.monte_carlo.workers)
        stop_after: Last stage of each trial, e.g. 'deployment' for deployment-only curves

    Returns:
        SweepResult

    Raises:
        ConfigError: If the value list is empty, a point is invalid or the stage is unknown
    """
    values = [float(v) for v in values]
    if not values:
        raise ConfigError([ConfigViolation(field="sweep.values", message="at least one value is required")])
    if stop_after is not None and stop_after not in STAGE_DISPLAY_NAMES:
        raise ConfigError([ConfigViolation(
            field="sweep.stop_after", message=f"unknown stage '{stop_after}', expected one of {list(STAGE_DISPLAY_NAMES)}",
        )])
    n_trials = trials or config.monte_carlo.trials
    n_workers = workers or get_worker_count(config.monte_carlo.workers)
    points = [(value, apply_axis(config, axis, value)) for value in values]
    jobs = [(value, point, t) for value, point in points for t in range(n_trials)]
    logger.info(f"Sweep over {axis}: {len(values)} point(s) x {n_trials} trial(s) on {n_workers} worker(s)")

    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        rows = list(pool.map(lambda job: run_trial(job[1], axis, job[0], job[2], stop_after), jobs))

    frame = pd.DataFrame(rows, columns=KEY_COLUMNS + TRIAL_COLUMNS)
    summary = aggregate(frame)
    feasible = int(frame["feasible"].sum())
    logger.info(f"Sweep done: {feasible}/{len(frame)} feasible trial(s)")
    return SweepResult(axis=axis, values=values, trials=frame, summary=summary)
