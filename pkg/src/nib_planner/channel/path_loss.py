"""
Path Loss Models
Sigmoid air-to-ground loss for access links and free-space loss for the HAPS backhaul
"""

import numpy as np
from scipy.constants import speed_of_light

from nib_planner.models.schemas import Environment

# Relative slack when checking d >= H
_DISTANCE_TOLERANCE = 1e-12


def elevation_deg(distance_m, altitude_m):
    """Elevation angle (degrees) of a link with slant distance d and height H"""
    ratio = np.clip(np.asarray(altitude_m, dtype=float) / np.asarray(distance_m, dtype=float), 0.0, 1.0)
    return np.degrees(np.arcsin(ratio))


def los_correction_db(elevation, env: Environment):
    """A / (1 + a exp(-b (phi - a))) with phi in degrees"""
    return env.excess_gap_db / (1.0 + env.a * np.exp(-env.b * (np.asarray(elevation, dtype=float) - env.a)))


def al_path_loss(distance_m, altitude_m, carrier_freq_hz, env: Environment):
    """
    Mean air-to-ground path loss

    Args:
        distance_m: Slant distance d_jk
        altitude_m: NIB altitude H_j (> 0)
        carrier_freq_hz: Carrier f_c
        env: Propagation environment

    Returns:
        Loss in dB: sigmoid LOS correction + 20log10(d) + 20log10(4 pi f_c / c) + eta_NLOS

    Raises:
        ValueError: If the altitude is not positive or d < H
    """
    distance = np.asarray(distance_m, dtype=float)
    altitude = np.asarray(altitude_m, dtype=float)
    if np.any(altitude <= 0):
        raise ValueError("altitude must be positive")
    if np.any(distance < altitude * (1.0 - _DISTANCE_TOLERANCE)):
        raise ValueError("slant distance shorter than altitude")
    phi = elevation_deg(distance, altitude)
    loss = (
        los_correction_db(phi, env)
        + 20.0 * np.log10(distance)
        + 20.0 * np.log10(4.0 * np.pi * np.asarray(carrier_freq_hz, dtype=float) / speed_of_light)
        + env.eta_nlos_db
    )
    return float(loss) if np.ndim(loss) == 0 else loss


def haps_fspl(distance_m, wavelength_m):
    """
    Free-space loss (4 pi d / lambda)^2, linear

    Args:
        distance_m: Slant distance d_j (> 0)
        wavelength_m: Carrier wavelength (> 0)
    """
    distance = np.asarray(distance_m, dtype=float)
    if np.any(distance <= 0) or wavelength_m <= 0:
        raise ValueError("distance and wavelength must be positive")
    loss = 16.0 * np.pi ** 2 * distance ** 2 / wavelength_m ** 2
    return float(loss) if np.ndim(loss) == 0 else loss
