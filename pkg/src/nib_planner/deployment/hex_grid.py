"""
Conventional cellular baseline: hexagonal packing of beams over the coverage disk
"""

import logging
import math
from typing import Sequence

import numpy as np

from nib_planner.deployment.plan import DeploymentPlan

logger = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)


def hex_lattice(center: Sequence[float], reach: float, r: float) -> np.ndarray:
    """
    Hexagonal lattice points with spacing sqrt(3) r strictly within `reach` of center

    Returns:
        (N, 2) points ordered by distance from center, then angle
    """
    spacing = SQRT3 * r
    row_step = 1.5 * r
    n_rows = int(math.ceil(reach / row_step)) + 1
    n_cols = int(math.ceil(reach / spacing)) + n_rows + 1
    a, b = np.meshgrid(np.arange(-n_cols, n_cols + 1), np.arange(-n_rows, n_rows + 1))
    a = a.ravel()
    b = b.ravel()
    offsets = np.column_stack((a * spacing + b * spacing / 2.0, b * row_step))
    distance = np.hypot(offsets[:, 0], offsets[:, 1])
    inside = distance < reach * (1.0 - 1e-12)
    offsets = offsets[inside]
    distance = distance[inside]
    angle = np.round(np.arctan2(offsets[:, 1], offsets[:, 0]), 12)
    order = np.lexsort((angle, np.round(distance, 6)))
    return offsets[order] + np.asarray(center, dtype=float)


def hex_baseline(R: float, r: float, center: Sequence[float] = (0.0, 0.0)) -> DeploymentPlan:
    """
    Conventional grid deployment

    Args:
        R: Coverage radius
        r: Beam radius
        center: Coverage-disk centre w_0

    Returns:
        Plan with every lattice beam whose disk intersects the coverage disk
    """
    if R <= 0 or r <= 0:
        raise ValueError("radii must be positive")
    if r >= R:
        centers = np.asarray([center], dtype=float)
    else:
        centers = hex_lattice(center, R + r, r)
    logger.debug(f"Hex baseline R={R:.0f}, r={r:.0f}: J={len(centers)}")
    return DeploymentPlan(
        centers=centers, radius=float(r), method="hex", center_ids=np.full(len(centers), -1, dtype=int),
    )
