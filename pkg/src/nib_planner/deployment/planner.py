"""
Deployment Planner
Chooses and runs a disk-cover solver for one beam radius
"""

import logging
from typing import Optional, Sequence

import numpy as np

from nib_planner.config.settings import get_exact_cap
from nib_planner.deployment.coverage import as_positions, coverage_matrix
from nib_planner.deployment.disk_cover import gdc_exact, gdc_greedy, gdc_lattice, prune_redundant
from nib_planner.deployment.hex_grid import hex_baseline
from nib_planner.deployment.plan import DeploymentPlan
from nib_planner.errors import InfeasibleError
from nib_planner.models.schemas import DeploymentSettings, InfeasibilityReport

logger = logging.getLogger(__name__)


def _pruned_greedy(users: np.ndarray, r: float, prune: bool) -> DeploymentPlan:
    D = coverage_matrix(users, r)
    plan = gdc_greedy(D)
    if not prune or plan.n_nibs < 2:
        return plan
    members = D.column_members()
    keep = prune_redundant([members[c] for c in plan.center_ids], D.size)
    ids = plan.center_ids[keep]
    return DeploymentPlan(centers=D.positions[ids], radius=D.radius, method="gdc-greedy", center_ids=ids)


def deploy(
    users,
    r: float,
    settings: Optional[DeploymentSettings] = None,
    coverage_radius: Optional[float] = None,
    center: Sequence[float] = (0.0, 0.0),
) -> DeploymentPlan:
    """
    Cover all users with beams of radius r

    Args:
        users: User positions (array, UserPopulation or GroundUser list)
        r: Beam radius
        settings: Solver choice; 'auto' picks exact for tiny K, else the best of greedy and lattice
        coverage_radius: R, needed by the hex method
        center: HAPS ground projection, used by the hex method

    Returns:
        DeploymentPlan

    Raises:
        InfeasibleError: If there are no users to cover
    """
    settings = settings or DeploymentSettings()
    positions = as_positions(users)
    k = positions.shape[0]
    if settings.method == "hex":
        if coverage_radius is None:
            raise ValueError("hex deployment needs the coverage radius")
        return hex_baseline(coverage_radius, r, center)
    if k == 0:
        raise InfeasibleError(InfeasibilityReport(stage="deployment", reason="no users to cover"))

    exact_cap = get_exact_cap(settings.exact_cap)
    method = settings.method
    if method == "gdc-exact":
        return gdc_exact(coverage_matrix(positions, r), budget=exact_cap)
    if method == "gdc-greedy":
        return _pruned_greedy(positions, r, settings.prune)
    if method == "gdc-lattice":
        return gdc_lattice(positions, r, prune=settings.prune)

    if k <= exact_cap:
        return gdc_exact(coverage_matrix(positions, r), budget=exact_cap)
    candidates = [gdc_lattice(positions, r, prune=settings.prune)]
    if k <= settings.greedy_cap:
        candidates.insert(0, _pruned_greedy(positions, r, settings.prune))
    best = min(candidates, key=lambda plan: plan.n_nibs)
    logger.info(
        f"Deployment r={r:.0f} m: J={best.n_nibs} via {best.method} "
        f"(candidates {[(p.method, p.n_nibs) for p in candidates]})"
    )
    return best
