"""
Antenna Gain Models
Bessel-pattern gain of the NIB access beams and the parabolic HAPS backhaul pattern
"""

import numpy as np
from scipy.special import jv

# mu at the half-power angle of the Bessel pattern
HALF_POWER_MU = 2.07123
# Below this |mu| the pattern uses its Taylor expansion 1 - 5 mu^2 / 64
SMALL_MU = 1e-4
HAPS_PATTERN_CONSTANT = 70.0 * np.pi


def _scalar_or_array(value: np.ndarray):
    return float(value) if np.ndim(value) == 0 else value


def al_beam_gain(theta_off_deg, hpbw_deg, g_max):
    """
    Access-link beam gain towards a user

    Args:
        theta_off_deg: Off-axis angle between boresight and the user, in [0, 90)
        hpbw_deg: One-sided half-power beamwidth theta^3dB (> 0)
        g_max: Boresight gain, linear

    Returns:
        G_max * (J1(mu)/(2 mu) + 36 J3(mu)/mu^3)^2 with mu = 2.07123 sin(theta)/sin(theta^3dB)
    """
    theta = np.asarray(theta_off_deg, dtype=float)
    hpbw = np.asarray(hpbw_deg, dtype=float)
    if np.any(hpbw <= 0):
        raise ValueError("half-power beamwidth must be positive")
    if np.any(theta < 0) or np.any(theta >= 90):
        raise ValueError("off-axis angle must lie in [0, 90) degrees")

    mu = HALF_POWER_MU * np.sin(np.radians(theta)) / np.sin(np.radians(hpbw))
    small = np.abs(mu) < SMALL_MU
    safe = np.where(small, 1.0, mu)
    pattern = jv(1, safe) / (2.0 * safe) + 36.0 * jv(3, safe) / safe ** 3
    pattern = np.where(small, 1.0 - 5.0 * mu ** 2 / 64.0, pattern)
    return _scalar_or_array(g_max * pattern ** 2)


def off_axis_angle_deg(horizontal_distance_m, altitude_m):
    """Angle between a downward boresight and the line to a ground point"""
    return np.degrees(np.arctan2(np.asarray(horizontal_distance_m, dtype=float), altitude_m))


def haps_peak_gain(aperture_efficiency: float, hpbw_deg: float) -> float:
    """G_0 = eta (70 pi / theta^3dB)^2, linear"""
    if hpbw_deg <= 0:
        raise ValueError("HAPS beamwidth must be positive")
    return aperture_efficiency * (HAPS_PATTERN_CONSTANT / hpbw_deg) ** 2


def haps_beam_gain(nib_center, beam_center, haps_altitude_m, nib_altitude_m, aperture_efficiency, hpbw_deg):
    """
    HAPS backhaul antenna gain towards a NIB

    Args:
        nib_center: NIB ground projection w_j, shape (2,) or (J, 2)
        beam_center: HAPS ground projection w_0, shape (2,)
        haps_altitude_m: H
        nib_altitude_m: H_j, scalar or (J,)
        aperture_efficiency: eta
        hpbw_deg: theta_HAPS^3dB in degrees

    Returns:
        Linear gain; G_dB = G_0,dB - 12 (G_0/eta) (theta_j / 70 pi)^2 with theta_j in degrees
    """
    nib_altitude = np.asarray(nib_altitude_m, dtype=float)
    height = haps_altitude_m - nib_altitude
    if np.any(height <= 0):
        raise ValueError("HAPS must fly above every NIB")
    offset = np.linalg.norm(np.asarray(nib_center, dtype=float) - np.asarray(beam_center, dtype=float), axis=-1)
    theta = np.degrees(np.arctan(offset / height))
    peak = haps_peak_gain(aperture_efficiency, hpbw_deg)
    gain_db = 10.0 * np.log10(peak) - 12.0 * (peak / aperture_efficiency) * (theta / HAPS_PATTERN_CONSTANT) ** 2
    return _scalar_or_array(np.power(10.0, gain_db / 10.0))
