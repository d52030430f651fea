"""
Coverage Matrix
Exact Euclidean threshold matrix of users against user-centred candidate disks
"""

import logging

import numpy as np
from scipy import sparse
from scipy.spatial import cKDTree

from nib_planner.deployment.plan import CoverageMatrix

logger = logging.getLogger(__name__)

# Query slack so boundary pairs survive the tree search; the exact test follows
_QUERY_SLACK = 1e-9


def as_positions(users) -> np.ndarray:
    """Accept a UserPopulation, a list of GroundUser, or an (K, 2) array"""
    if hasattr(users, "positions"):
        return np.asarray(users.positions, dtype=float)
    if len(users) and hasattr(users[0], "position"):
        return np.array([u.position for u in users], dtype=float)
    return np.asarray(users, dtype=float).reshape(-1, 2)


def coverage_matrix(users, r: float) -> CoverageMatrix:
    """
    Build the disk-cover matrix D

    Args:
        users: User positions (see as_positions)
        r: Beam radius (> 0); the boundary is inclusive

    Returns:
        Symmetric CoverageMatrix with unit diagonal
    """
    positions = as_positions(users)
    if r <= 0:
        raise ValueError("beam radius must be positive")
    k = positions.shape[0]
    if k == 0:
        raise ValueError("coverage matrix needs at least one user")

    tree = cKDTree(positions)
    pairs = tree.query_pairs(r * (1.0 + _QUERY_SLACK), output_type="ndarray")
    if len(pairs):
        delta = positions[pairs[:, 0]] - positions[pairs[:, 1]]
        pairs = pairs[np.hypot(delta[:, 0], delta[:, 1]) <= r]
    diagonal = np.arange(k)
    rows = np.concatenate((pairs[:, 0], pairs[:, 1], diagonal)) if len(pairs) else diagonal
    cols = np.concatenate((pairs[:, 1], pairs[:, 0], diagonal)) if len(pairs) else diagonal
    data = np.ones(rows.shape[0], dtype=bool)
    matrix = sparse.csr_matrix((data, (rows, cols)), shape=(k, k), dtype=bool)
    logger.debug(f"Coverage matrix K={k}, r={r:.1f}: {matrix.nnz} nonzeros")
    return CoverageMatrix(matrix=matrix, positions=positions, radius=float(r))
