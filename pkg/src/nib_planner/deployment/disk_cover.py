"""
Geometric Disk Cover
Greedy, exact branch-and-bound, and lattice-seeded solvers for the minimum user-centred disk cover
"""

import logging
import math
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import cKDTree

from nib_planner.deployment.hex_grid import hex_lattice
from nib_planner.deployment.plan import CoverageMatrix, DeploymentPlan
from nib_planner.errors import ExactCoverCapError

logger = logging.getLogger(__name__)

DEFAULT_EXACT_CAP = 20


def _plan(D: CoverageMatrix, selected: Sequence[int], method: str) -> DeploymentPlan:
    ids = np.asarray(list(selected), dtype=int)
    return DeploymentPlan(centers=D.positions[ids], radius=D.radius, method=method, center_ids=ids)


def greedy_selection(D: CoverageMatrix) -> List[int]:
    """Columns picked by greedy max-coverage, in selection order"""
    csr = D.matrix.tocsr()
    csc = D.matrix.tocsc()
    k = D.size
    gain = np.diff(csc.indptr).astype(np.int64)
    uncovered = np.ones(k, dtype=bool)
    selected: List[int] = []
    while uncovered.any():
        # argmax returns the first maximum: lowest user id wins ties
        column = int(np.argmax(gain))
        members = csc.indices[csc.indptr[column]:csc.indptr[column + 1]]
        newly = members[uncovered[members]]
        selected.append(column)
        uncovered[newly] = False
        affected = np.concatenate([csr.indices[csr.indptr[i]:csr.indptr[i + 1]] for i in newly])
        gain -= np.bincount(affected, minlength=k)
    return selected


def gdc_greedy(D: CoverageMatrix) -> DeploymentPlan:
    """
    Greedy geometric disk cover

    Args:
        D: Coverage matrix

    Returns:
        Feasible plan; each step takes the column covering most uncovered users
    """
    selected = greedy_selection(D)
    logger.debug(f"Greedy cover: J={len(selected)} for K={D.size}")
    return _plan(D, selected, "gdc-greedy")


def prune_redundant(members: Sequence[np.ndarray], n_users: int) -> List[int]:
    """
    Drop disks whose users are all covered by other kept disks

    Args:
        members: User indices covered by each selected disk, in selection order
        n_users: Total user count

    Returns:
        Positions (into members) of the disks that are kept, in selection order
    """
    counts = np.zeros(n_users, dtype=np.int64)
    for users in members:
        counts[users] += 1
    # smallest disks first, later selections first among equals
    order = sorted(range(len(members)), key=lambda i: (len(members[i]), -i))
    keep = np.ones(len(members), dtype=bool)
    for i in order:
        users = members[i]
        if len(users) == 0 or counts[users].min() >= 2:
            keep[i] = False
            counts[users] -= 1
    return [i for i in range(len(members)) if keep[i]]


def lp_lower_bound(D: CoverageMatrix) -> int:
    """Ceiling of the LP relaxation of the cover integer program"""
    dense = D.dense().astype(float)
    k = D.size
    result = linprog(
        c=np.ones(k), A_ub=-dense, b_ub=-np.ones(k), bounds=[(0.0, 1.0)] * k, method="highs",
    )
    if not result.success:
        return 1
    return max(1, math.ceil(result.fun - 1e-9))


class _BranchAndBound:
    """Depth-first search over covering columns with bitmask state"""

    def __init__(self, D: CoverageMatrix, incumbent: List[int]):
        dense = D.dense()
        self.k = D.size
        self.full = (1 << self.k) - 1
        self.masks = [sum(1 << int(i) for i in np.flatnonzero(dense[:, c])) for c in range(self.k)]
        self.coverers = [[int(c) for c in np.flatnonzero(dense[i, :])] for i in range(self.k)]
        self.coverer_masks = [sum(1 << c for c in cols) for cols in self.coverers]
        self.best = sorted(incumbent)
        self.nodes = 0

    def _bound(self, covered: int) -> int:
        uncovered = self.full & ~covered
        remaining = bin(uncovered).count("1")
        if remaining == 0:
            return 0
        widest = max(bin(m & uncovered).count("1") for m in self.masks)
        ratio_bound = math.ceil(remaining / widest)
        # users with pairwise disjoint coverer sets each need their own disk
        used = 0
        packing = 0
        for i in range(self.k):
            if uncovered >> i & 1 and not (self.coverer_masks[i] & used):
                used |= self.coverer_masks[i]
                packing += 1
        return max(ratio_bound, packing)

    def search(self, chosen: List[int], covered: int) -> None:
        self.nodes += 1
        if covered == self.full:
            if len(chosen) < len(self.best):
                self.best = sorted(chosen)
            return
        if len(chosen) + self._bound(covered) >= len(self.best):
            return
        uncovered = self.full & ~covered
        # branch on the uncovered user with fewest coverers (lowest id on ties)
        pivot = min(
            (i for i in range(self.k) if uncovered >> i & 1),
            key=lambda i: (len(self.coverers[i]), i),
        )
        options = sorted(
            self.coverers[pivot],
            key=lambda c: (-bin(self.masks[c] & uncovered).count("1"), c),
        )
        for column in options:
            self.search(chosen + [column], covered | self.masks[column])


def gdc_exact(D: CoverageMatrix, budget: Optional[int] = None) -> DeploymentPlan:
    """
    Minimum disk cover by branch-and-bound

    Args:
        D: Coverage matrix
        budget: Largest K accepted (default 20)

    Returns:
        Provably minimal plan

    Raises:
        ExactCoverCapError: If K exceeds the budget
    """
    cap = DEFAULT_EXACT_CAP if budget is None else budget
    if D.size > cap:
        raise ExactCoverCapError(D.size, cap)
    incumbent = greedy_selection(D)
    root_bound = lp_lower_bound(D)
    if len(incumbent) <= root_bound:
        logger.debug(f"Exact cover: greedy J={len(incumbent)} meets LP bound")
        return _plan(D, sorted(incumbent), "gdc-exact")
    solver = _BranchAndBound(D, incumbent)
    solver.search([], 0)
    logger.debug(f"Exact cover: J={len(solver.best)} after {solver.nodes} nodes (LP bound {root_bound})")
    return _plan(D, solver.best, "gdc-exact")


def gdc_lattice(positions: np.ndarray, r: float, prune: bool = True) -> DeploymentPlan:
    """
    Lattice-seeded cover for large populations

    A hexagonal lattice is snapped to the nearest users, its spacing shrunk by
    the snap distance, uncovered users are repaired with disks centred on
    themselves, and redundant disks are pruned. Centres stay user coordinates.

    Args:
        positions: (K, 2) user positions
        r: Beam radius
        prune: Drop redundant disks at the end

    Returns:
        Feasible plan tagged gdc-lattice
    """
    positions = np.asarray(positions, dtype=float)
    k = positions.shape[0]
    if k == 0:
        raise ValueError("lattice cover needs at least one user")
    tree = cKDTree(positions)
    low, high = positions.min(axis=0), positions.max(axis=0)
    origin = (low + high) / 2.0
    extent = float(np.max(np.linalg.norm(positions - origin, axis=1)))

    spacing_radius = r
    for _ in range(2):
        lattice = hex_lattice(origin, extent + spacing_radius, spacing_radius)
        snap, nearest = tree.query(lattice)
        kept = snap <= spacing_radius
        margin = float(snap[kept].max()) if kept.any() else 0.0
        if margin >= 0.5 * r:
            break
        spacing_radius = r - margin
    seeds = nearest[kept]
    _, first = np.unique(seeds, return_index=True)
    selected = [int(s) for s in seeds[np.sort(first)]]

    # repair pass for slivers left by snapping
    center_tree = cKDTree(positions[selected])
    gap, _ = center_tree.query(positions)
    uncovered = gap > r
    while uncovered.any():
        user = int(np.flatnonzero(uncovered)[0])
        selected.append(user)
        reach = tree.query_ball_point(positions[user], r)
        uncovered[reach] = False

    if prune and len(selected) > 1:
        members = [np.asarray(m, dtype=int) for m in tree.query_ball_point(positions[selected], r)]
        keep = prune_redundant(members, k)
        selected = [selected[i] for i in keep]

    ids = np.asarray(selected, dtype=int)
    logger.debug(f"Lattice cover: J={len(ids)} for K={k}, r={r:.1f}")
    return DeploymentPlan(centers=positions[ids], radius=float(r), method="gdc-lattice", center_ids=ids)
