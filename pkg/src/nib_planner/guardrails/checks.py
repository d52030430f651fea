"""
Constraint Guardrails
Re-verifies each stage's output with code independent of the solvers
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence

import numpy as np

from nib_planner.guardrails.guardrail_config import GuardrailConfig

logger = logging.getLogger(__name__)


@dataclass
class GuardrailReport:
    """Violations found across all checks of one epoch"""

    violations: List[str] = field(default_factory=list)
    checks_run: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def extend(self, check: str, found: Iterable[str]) -> None:
        self.checks_run.append(check)
        self.violations.extend(f"{check}: {v}" for v in found)


def check_cover(positions: np.ndarray, centers: np.ndarray, radius: float) -> List[str]:
    """Every user lies within `radius` of some centre"""
    tol = GuardrailConfig.get_tolerance('coverage_m')
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    if positions.shape[0] == 0:
        return []
    if centers.shape[0] == 0:
        return [f"{positions.shape[0]} user(s) and no disks"]
    uncovered = []
    for k, u in enumerate(positions):
        if np.min(np.hypot(centers[:, 0] - u[0], centers[:, 1] - u[1])) > radius + tol:
            uncovered.append(k)
    return [f"user {k} uncovered" for k in uncovered[:20]]


def check_association(
    positions: np.ndarray,
    nib_of_user: np.ndarray,
    centers: np.ndarray,
    radii: Sequence[float],
) -> List[str]:
    """Each user has one serving NIB and lies within its (final) beam disk"""
    tol = GuardrailConfig.get_tolerance('coverage_m')
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    radii = np.asarray(radii, dtype=float)
    found = []
    for k, (u, j) in enumerate(zip(np.asarray(positions, dtype=float), np.asarray(nib_of_user))):
        if j < 0 or j >= centers.shape[0]:
            found.append(f"user {k} has no valid NIB ({j})")
            continue
        d = float(np.hypot(*(u - centers[j])))
        if d > radii[j] + tol:
            found.append(f"user {k} at {d:.3f} m from NIB {j} (radius {radii[j]:.3f} m)")
    return found[:20]


def check_geometry(
    altitudes: Sequence[float],
    hpbws: Sequence[float],
    altitude_bounds: Sequence[float],
    hpbw_bounds: Sequence[float],
) -> List[str]:
    """Altitude and beamwidth of every NIB within bounds"""
    tol = GuardrailConfig.get_tolerance('geometry')
    found = []
    for j, (h, t) in enumerate(zip(altitudes, hpbws)):
        if not altitude_bounds[0] - tol <= h <= altitude_bounds[1] + tol:
            found.append(f"NIB {j} altitude {h:.2f} m outside {tuple(altitude_bounds)}")
        if not hpbw_bounds[0] - tol <= t <= hpbw_bounds[1] + tol:
            found.append(f"NIB {j} beamwidth {t:.3f} deg outside {tuple(hpbw_bounds)}")
    return found


def check_noma(
    fractions: np.ndarray,
    aleph: np.ndarray,
    served: np.ndarray,
    target_rate_bps: float,
    bandwidth_hz: float,
    fractions_hat: Optional[np.ndarray] = None,
) -> List[str]:
    """
    Budget, SIC order and per-NIB threshold of an SIC-ordered split

    SINRs are recomputed from scratch: NIB j sees every stronger NIB's fraction
    as interference, the strongest sees none.
    """
    tol = GuardrailConfig.get_tolerance('power_budget')
    rel = GuardrailConfig.get_tolerance('rate_relative')
    f = np.asarray(fractions, dtype=float)
    found = []
    if np.any(f < -tol) or f.sum() > 1.0 + tol:
        found.append(f"fractions sum to {f.sum():.12f}")
    if np.any(f[~served] > tol) and np.any(served):
        # below-pivot NIBs carry nothing, except the strongest in a degraded split
        found.append("unserved NIB has a nonzero fraction")
    if fractions_hat is not None and np.any(served):
        hat = np.asarray(fractions_hat, dtype=float)[served]
        if np.any(np.diff(hat) > tol):
            found.append("threshold fractions are not non-increasing in channel strength")
    for j in np.flatnonzero(served):
        interference = sum(f[i] for i in range(j + 1, f.size))
        rate = bandwidth_hz * np.log2(1.0 + f[j] / (interference + aleph[j]))
        if rate < target_rate_bps * (1.0 - rel) - 1e-6:
            found.append(f"served position {j} reaches {rate:.1f} bps < {target_rate_bps:.1f} bps")
    return found


def check_access(
    cell: np.ndarray,
    power: np.ndarray,
    gain: np.ndarray,
    bandwidth_hz: np.ndarray,
    min_rate_bps: np.ndarray,
    group: Optional[np.ndarray] = None,
    caps: Optional[np.ndarray] = None,
) -> List[str]:
    """Per-cell power simplex, box, minimum rates and backhaul caps"""
    tol = GuardrailConfig.get_tolerance('power_budget')
    rel = GuardrailConfig.get_tolerance('rate_relative')
    found = []
    if np.any(power < -tol) or np.any(power > 1.0 + tol):
        found.append("power coefficient outside [0, 1]")
    for c in np.unique(cell):
        total = float(np.sum(power[cell == c]))
        if total > 1.0 + tol:
            found.append(f"cell {c} uses {total:.12f} of its budget")
    rates = bandwidth_hz * np.log2(1.0 + gain * power)
    short = np.flatnonzero(rates < min_rate_bps * (1.0 - rel))
    if short.size:
        found.append(f"{short.size} user(s) below the minimum rate")
    if group is not None and caps is not None:
        for g, cap in enumerate(caps):
            load = float(np.sum(rates[group == g]))
            if load > cap * (1.0 + rel) + 1e-6:
                found.append(f"backhaul group {g} carries {load:.1f} bps > cap {cap:.1f} bps")
    return found
