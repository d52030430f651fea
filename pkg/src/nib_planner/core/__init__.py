"""
Planning-loop orchestration, parameter sweeps and Monte Carlo trials
"""

from nib_planner.core.orchestrator import (
    EpochState,
    PlanningOrchestrator,
    RunResult,
    epoch_radii,
    run_planning,
)
from nib_planner.core.sweep import SWEEP_AXES, SweepResult, apply_axis, sweep, transmit_snr_power

__all__ = [
    'EpochState',
    'PlanningOrchestrator',
    'RunResult',
    'SWEEP_AXES',
    'SweepResult',
    'apply_axis',
    'epoch_radii',
    'run_planning',
    'sweep',
    'transmit_snr_power',
]
