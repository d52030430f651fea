"""
Performance metrics of the access and backhaul links
"""

from nib_planner.metrics.performance import (
    M2_PER_KM2,
    aee_access,
    aee_backhaul,
    ase_backhaul,
    build_metric_bundle,
    jain_index,
    se_avg_access,
    se_avg_backhaul,
    sum_rates,
)

__all__ = [
    'M2_PER_KM2',
    'aee_access',
    'aee_backhaul',
    'ase_backhaul',
    'build_metric_bundle',
    'jain_index',
    'se_avg_access',
    'se_avg_backhaul',
    'sum_rates',
]
