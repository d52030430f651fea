"""
Beam Geometry
Turns (centre, radius, elevation) into a feasible NIB altitude and beamwidth,
and runs the block-coordinate beam update for one NIB
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from nib_planner.beamopt.enclosing_circle import min_enclosing_circle
from nib_planner.channel.links import access_link_budget
from nib_planner.errors import GeometryInfeasibleError
from nib_planner.models.schemas import Environment, InfeasibilityReport, NibConfig, RatProfile

logger = logging.getLogger(__name__)

# Aperture diffraction limit r >= 0.443 lambda H / D
BEAM_FLOOR_FACTOR = 0.443
_TOL = 1e-9


@dataclass(frozen=True)
class BeamGeometry:
    """Finalized beam of one NIB"""

    center: np.ndarray
    radius_m: float
    altitude_m: float
    hpbw_deg: float
    elevation_deg: float
    adjustments: List[str] = field(default_factory=list)

    def as_tuple(self) -> Tuple[float, float, float]:
        return self.altitude_m, self.hpbw_deg, self.radius_m


def _largest_wavelength(rats: Union[RatProfile, Sequence[RatProfile], float]) -> float:
    if isinstance(rats, (int, float)):
        return float(rats)
    if isinstance(rats, RatProfile):
        return rats.wavelength_m
    return max(rat.wavelength_m for rat in rats)


def finalize_geometry(
    mec: Tuple[Sequence[float], float],
    phi_star_deg: float,
    nib_config: NibConfig,
    rat: Union[RatProfile, Sequence[RatProfile], float],
    nib_id: Optional[int] = None,
) -> BeamGeometry:
    """
    Derive altitude H = r tan(phi) and beamwidth theta = 90 - phi for a beam

    Clamps apply in order: elevation to the beamwidth bounds, altitude to its
    bounds (elevation follows), radius up to the beam-size floor
    0.443 lambda H / D, and radius up again when the beamwidth falls below its
    minimum. The radius never shrinks below the enclosing-circle radius.

    Args:
        mec: (centre, radius) of the users to serve
        phi_star_deg: Path-loss-optimal elevation
        nib_config: NIB altitude and beamwidth bounds, aperture diameter
        rat: RAT (or RATs, or a wavelength) setting the beam-size floor
        nib_id: Reported in infeasibility errors

    Returns:
        BeamGeometry

    Raises:
        GeometryInfeasibleError: If no triple satisfies every bound
    """
    center, r_mec = mec
    center = np.asarray(center, dtype=float)
    wavelength = _largest_wavelength(rat)
    h_min, h_max = nib_config.altitude_bounds_m
    theta_min, theta_max = nib_config.hpbw_bounds_deg
    phi_lo, phi_hi = 90.0 - theta_max, 90.0 - theta_min
    adjustments: List[str] = []

    phi = float(np.clip(phi_star_deg, phi_lo, phi_hi))
    if phi != phi_star_deg:
        adjustments.append("elevation")
    r = float(r_mec)
    if r > 0:
        H = r * math.tan(math.radians(phi))
        if H > h_max:
            H = h_max
            phi = math.degrees(math.atan2(H, r))
            adjustments.append("altitude_max")
        elif H < h_min:
            H = h_min
            phi = math.degrees(math.atan2(H, r))
            adjustments.append("altitude_min")
    else:
        H = h_min
        adjustments.append("single_point")

    floor = BEAM_FLOOR_FACTOR * wavelength * H / nib_config.aperture_diameter_m
    if r < floor:
        r = floor
        phi = math.degrees(math.atan2(H, r))
        adjustments.append("radius_floor")
    if phi > phi_hi:
        r = H / math.tan(math.radians(phi_hi))
        phi = phi_hi
        adjustments.append("beamwidth_min")

    theta = 90.0 - phi
    violations = {}
    if not h_min - _TOL <= H <= h_max + _TOL:
        violations["altitude_m"] = H
    if not theta_min - _TOL <= theta <= theta_max + _TOL:
        violations["hpbw_deg"] = theta
    if r < r_mec - _TOL:
        violations["radius_m"] = r
    if violations:
        details = {"radius_mec_m": float(r_mec), "elevation_deg": phi, **violations}
        raise GeometryInfeasibleError(InfeasibilityReport(
            stage="beamopt",
            reason=f"no beam geometry within bounds for radius {r_mec:.1f} m",
            nib_ids=[] if nib_id is None else [nib_id],
            details=details,
        ))
    if adjustments:
        logger.debug(f"NIB {nib_id}: geometry adjusted ({', '.join(adjustments)})")
    return BeamGeometry(
        center=center, radius_m=r, altitude_m=H, hpbw_deg=theta, elevation_deg=phi, adjustments=adjustments,
    )


def beam_objective_db(
    geometry: BeamGeometry,
    member_xy: np.ndarray,
    member_freq_hz: np.ndarray,
    env: Environment,
    g_max: float,
) -> float:
    """Worst member's large-scale gain G - L (dB)"""
    if len(member_xy) == 0:
        return math.inf
    budget = access_link_budget(
        member_xy, member_freq_hz, geometry.center, geometry.altitude_m, geometry.hpbw_deg, env, g_max,
    )
    return float(np.min(10.0 * np.log10(budget.beam_gain) - 10.0 * np.log10(budget.path_loss)))


def optimize_beam(
    member_xy: np.ndarray,
    member_freq_hz: np.ndarray,
    initial: Optional[BeamGeometry],
    phi_star_deg: float,
    nib_config: NibConfig,
    rats: Sequence[RatProfile],
    env: Environment,
    iterations: int = 1,
    nib_id: Optional[int] = None,
) -> BeamGeometry:
    """
    Block-coordinate beam update for one NIB

    Each pass fits the minimum enclosing circle of the members, re-derives
    (H, theta, r) and keeps the candidate only if the worst member's G - L does
    not drop below the incumbent's.

    Args:
        member_xy: (n, 2) positions of the associated users
        member_freq_hz: (n,) carriers of their RATs
        initial: Pre-optimization geometry, or None if it was infeasible
        phi_star_deg: Path-loss-optimal elevation
        nib_config: NIB bounds and antenna data
        rats: RATs served by the NIB (beam floor)
        env: Propagation environment
        iterations: Number of passes
        nib_id: For logging and error reports

    Returns:
        The accepted BeamGeometry
    """
    member_xy = np.asarray(member_xy, dtype=float).reshape(-1, 2)
    if member_xy.shape[0] == 0:
        if initial is None:
            raise ValueError("a NIB without members needs an initial geometry")
        return initial
    g_max = nib_config.g_max_linear
    incumbent = initial
    best = beam_objective_db(initial, member_xy, member_freq_hz, env, g_max) if initial is not None else -math.inf

    for _ in range(iterations):
        center, radius = min_enclosing_circle(member_xy)
        candidate = finalize_geometry((center, radius), phi_star_deg, nib_config, rats, nib_id=nib_id)
        score = beam_objective_db(candidate, member_xy, member_freq_hz, env, g_max)
        if incumbent is None or score >= best:
            incumbent, best = candidate, score
        else:
            logger.debug(f"NIB {nib_id}: enclosing-circle beam worse ({score:.2f} < {best:.2f} dB), kept previous")
    return incumbent
