"""
Minimum NIB deployment by geometric disk cover, plus the hexagonal grid baseline
"""

from nib_planner.deployment.coverage import as_positions, coverage_matrix
from nib_planner.deployment.disk_cover import (
    gdc_exact,
    gdc_greedy,
    gdc_lattice,
    greedy_selection,
    lp_lower_bound,
    prune_redundant,
)
from nib_planner.deployment.hex_grid import hex_baseline, hex_lattice
from nib_planner.deployment.plan import CoverageMatrix, DeploymentPlan
from nib_planner.deployment.planner import deploy

__all__ = [
    'CoverageMatrix',
    'DeploymentPlan',
    'as_positions',
    'coverage_matrix',
    'deploy',
    'gdc_exact',
    'gdc_greedy',
    'gdc_lattice',
    'greedy_selection',
    'hex_baseline',
    'hex_lattice',
    'lp_lower_bound',
    'prune_redundant',
]
