"""
Minimum enclosing circle of a NIB's users

Welzl's incremental algorithm on the convex hull, with the quadratic-program
dual (kappa over the simplex) kept as an independent solver for validation.
"""

import logging
from dataclasses import dataclass
from math import hypot
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import ConvexHull

logger = logging.getLogger(__name__)

Circle = Tuple[float, float, float]

_SHUFFLE_SEED = 0


@dataclass(frozen=True)
class DualCircle:
    """Circle recovered from the dual QP, with its multipliers"""

    center: np.ndarray
    radius: float
    kappa: np.ndarray
    iota: float
    dual_radius: float   # sqrt(kappa' Xi kappa - iota)


def _in_circle(p, c: Optional[Circle]) -> bool:
    return c is not None and hypot(p[0] - c[0], p[1] - c[1]) <= c[2] * (1 + 1e-12) + 1e-12


def _cross(px, py, qx, qy, rx, ry) -> float:
    return (qx - px) * (ry - py) - (qy - py) * (rx - px)


def _diameter(a, b) -> Circle:
    cx = (a[0] + b[0]) / 2
    cy = (a[1] + b[1]) / 2
    return (cx, cy, max(hypot(cx - a[0], cy - a[1]), hypot(cx - b[0], cy - b[1])))


def _circumcircle(a, b, c) -> Optional[Circle]:
    ox = (min(a[0], b[0], c[0]) + max(a[0], b[0], c[0])) / 2
    oy = (min(a[1], b[1], c[1]) + max(a[1], b[1], c[1])) / 2
    ax, ay = a[0] - ox, a[1] - oy
    bx, by = b[0] - ox, b[1] - oy
    cx, cy = c[0] - ox, c[1] - oy
    d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0
    if d == 0.0:
        return None
    x = ox + ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d
    y = oy + ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d
    return (x, y, max(hypot(x - a[0], y - a[1]), hypot(x - b[0], y - b[1]), hypot(x - c[0], y - c[1])))


def _circle_two(points, p, q) -> Circle:
    circ = _diameter(p, q)
    left = right = None
    px, py = p
    qx, qy = q
    for r in points:
        if _in_circle(r, circ):
            continue
        cross = _cross(px, py, qx, qy, r[0], r[1])
        c = _circumcircle(p, q, r)
        if c is None:
            continue
        if cross > 0.0 and (left is None or _cross(px, py, qx, qy, c[0], c[1]) > _cross(px, py, qx, qy, left[0], left[1])):
            left = c
        elif cross < 0.0 and (right is None or _cross(px, py, qx, qy, c[0], c[1]) < _cross(px, py, qx, qy, right[0], right[1])):
            right = c
    if left is None and right is None:
        return circ
    if left is None:
        return right
    if right is None:
        return left
    return left if left[2] <= right[2] else right


def _circle_one(points, p) -> Circle:
    c = (p[0], p[1], 0.0)
    for i, q in enumerate(points):
        if not _in_circle(q, c):
            if c[2] == 0.0:
                c = _diameter(p, q)
            else:
                c = _circle_two(points[:i + 1], p, q)
    return c


def _hull_points(points: np.ndarray) -> np.ndarray:
    unique = np.unique(points, axis=0)
    if unique.shape[0] < 4:
        return unique
    try:
        return unique[ConvexHull(unique).vertices]
    except Exception as exc:  # collinear sets have no 2-D hull
        logger.debug(f"Convex hull skipped ({exc.__class__.__name__}); using all points")
        return unique


def welzl(points) -> Circle:
    """
    Smallest enclosing circle by Welzl's incremental algorithm

    Args:
        points: (n, 2) coordinates, n >= 1

    Returns:
        (cx, cy, r)
    """
    hull = _hull_points(np.asarray(points, dtype=float).reshape(-1, 2))
    order = np.random.default_rng(_SHUFFLE_SEED).permutation(hull.shape[0])
    shuffled = [(float(x), float(y)) for x, y in hull[order]]
    c: Optional[Circle] = None
    for i, p in enumerate(shuffled):
        if c is None or not _in_circle(p, c):
            c = _circle_one(shuffled[:i + 1], p)
    return c


def min_enclosing_circle_qp(points) -> DualCircle:
    """
    Enclosing circle from the dual QP: min kappa' Xi kappa - d' kappa on the simplex

    Args:
        points: (n, 2) coordinates, n >= 1

    Returns:
        DualCircle with w = U' kappa and r = sqrt(kappa' Xi kappa - iota)
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        raise ValueError("enclosing circle of an empty point set")
    origin = pts.mean(axis=0)
    scale = float(np.max(np.linalg.norm(pts - origin, axis=1)))
    if scale == 0.0:
        return DualCircle(center=origin, radius=0.0, kappa=np.full(len(pts), 1.0 / len(pts)), iota=0.0, dual_radius=0.0)
    U = (pts - origin) / scale
    xi = U @ U.T
    d = np.sum(U * U, axis=1)
    n = U.shape[0]

    result = minimize(
        lambda k: k @ xi @ k - d @ k,
        np.full(n, 1.0 / n),
        jac=lambda k: 2.0 * xi @ k - d,
        method="SLSQP",
        bounds=[(0.0, 1.0)] * n,
        constraints=[{"type": "eq", "fun": lambda k: np.sum(k) - 1.0, "jac": lambda k: np.ones_like(k)}],
        options={"ftol": 1e-15, "maxiter": 1000},
    )
    kappa = np.clip(result.x, 0.0, None)
    kappa /= kappa.sum()
    stationarity = 2.0 * xi @ kappa - d
    support = kappa > 1e-6 * kappa.max()
    iota = float(np.mean(stationarity[support]))
    quad = float(kappa @ xi @ kappa)
    dual_radius = scale * np.sqrt(max(quad - iota, 0.0))
    center = origin + scale * (U.T @ kappa)
    radius = float(np.max(np.linalg.norm(pts - center, axis=1)))
    return DualCircle(center=center, radius=radius, kappa=kappa, iota=iota, dual_radius=float(dual_radius))


def min_enclosing_circle(points, method: str = "welzl") -> Tuple[np.ndarray, float]:
    """
    Smallest circle containing every point

    Args:
        points: (n, 2) coordinates
        method: 'welzl' (exact combinatorial) or 'qp' (dual quadratic program)

    Returns:
        (center, radius); the radius is the largest centre-to-point distance
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        raise ValueError("enclosing circle of an empty point set")
    if method == "qp":
        dual = min_enclosing_circle_qp(pts)
        return dual.center, dual.radius
    if method != "welzl":
        raise ValueError(f"unknown enclosing-circle method '{method}'")
    cx, cy, _ = welzl(pts)
    center = np.array([cx, cy])
    radius = float(np.max(np.linalg.norm(pts - center, axis=1)))
    return center, radius
