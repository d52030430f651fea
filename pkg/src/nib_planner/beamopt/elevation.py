"""
Cell-edge elevation angle minimizing the air-to-ground path loss
"""

import logging
import math
from typing import Tuple

import numpy as np
from scipy.constants import speed_of_light
from scipy.optimize import brentq

from nib_planner.channel.path_loss import los_correction_db
from nib_planner.models.schemas import Environment

logger = logging.getLogger(__name__)

DEFAULT_BRACKET_DEG = (1e-6, 90.0 - 1e-6)
_DB_PER_LN = 20.0 / math.log(10.0)


def edge_path_loss_db(phi_deg, r_m: float, env: Environment, carrier_freq_hz: float):
    """Path loss at the cell edge for elevation phi: distance r*sec(phi)"""
    phi = np.asarray(phi_deg, dtype=float)
    distance = r_m / np.cos(np.radians(phi))
    return (
        los_correction_db(phi, env)
        + 20.0 * np.log10(distance)
        + 20.0 * np.log10(4.0 * np.pi * carrier_freq_hz / speed_of_light)
        + env.eta_nlos_db
    )


def edge_path_loss_slope(phi_deg, env: Environment):
    """
    dL/dphi (dB per degree) of the cell-edge loss

    With abar = a e^{ab}: A b abar e^{-b phi} / (1 + abar e^{-b phi})^2 + (20/ln 10) tan(phi) pi/180
    """
    phi = np.asarray(phi_deg, dtype=float)
    a_bar = env.a * math.exp(env.a * env.b)
    decay = a_bar * np.exp(-env.b * phi)
    sigmoid_term = env.excess_gap_db * env.b * decay / (1.0 + decay) ** 2
    secant_term = _DB_PER_LN * np.tan(np.radians(phi)) * math.pi / 180.0
    return sigmoid_term + secant_term


def optimal_elevation(
    r_m: float,
    env: Environment,
    carrier_freq_hz: float = 2e9,
    bracket: Tuple[float, float] = DEFAULT_BRACKET_DEG,
) -> float:
    """
    Elevation angle minimizing the cell-edge path loss

    The minimizer does not depend on r or f_c; both only shift the loss.

    Args:
        r_m: Beam radius (> 0)
        env: Propagation environment
        carrier_freq_hz: Carrier frequency
        bracket: Search interval in degrees

    Returns:
        phi* in degrees
    """
    if r_m <= 0:
        raise ValueError("beam radius must be positive")
    low, high = bracket
    if env.excess_gap_db >= 0:
        logger.warning(f"A={env.excess_gap_db:.3g} >= 0: loss has no interior minimum, using {low} deg")
        return low
    slope_low = float(edge_path_loss_slope(low, env))
    slope_high = float(edge_path_loss_slope(high, env))
    if slope_low >= 0:
        logger.warning(f"Loss increasing over the whole bracket (slope {slope_low:.3g} at {low} deg); clamping")
        return low
    if slope_high <= 0:
        logger.warning(f"Loss decreasing over the whole bracket (slope {slope_high:.3g} at {high} deg); clamping")
        return high
    phi = brentq(lambda p: float(edge_path_loss_slope(p, env)), low, high, xtol=1e-13, rtol=1e-15, maxiter=500)
    logger.debug(f"Optimal elevation {phi:.6f} deg for {env.label}")
    return float(phi)
