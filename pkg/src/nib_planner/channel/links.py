"""
Channel Assembly
Combines fading, beam gain and path loss into access gains |h|^2 and backhaul aleph_j
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from nib_planner.channel.antenna import al_beam_gain, haps_beam_gain, off_axis_angle_deg
from nib_planner.channel.fading import FadingSample, sample_rayleigh, sample_rician
from nib_planner.channel.path_loss import al_path_loss, elevation_deg, haps_fspl
from nib_planner.channel.units import db_to_linear, noise_power_w
from nib_planner.models.schemas import Environment, GroundUser, HapsConfig, NibConfig, NibNode, RatProfile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinkBudget:
    """Large-scale terms of a batch of NIB-to-user links"""

    beam_gain: np.ndarray       # linear
    path_loss: np.ndarray       # linear
    elevation_deg: np.ndarray
    off_axis_deg: np.ndarray
    distance_m: np.ndarray

    @property
    def mean_gain(self) -> np.ndarray:
        return self.beam_gain / self.path_loss


@dataclass(frozen=True)
class AccessChannel:
    """Per-antenna channel of one NIB-to-user access link"""

    gains: np.ndarray           # (M,) complex h_kj
    beam_gain: float
    path_loss: float
    elevation_deg: float
    distance_m: float

    @property
    def power(self) -> np.ndarray:
        return np.abs(self.gains) ** 2


@dataclass(frozen=True)
class BackhaulChannel:
    """HAPS-to-NIB backhaul link; fields are scalars for one NIB or (J,) arrays for a fleet"""

    gain: np.ndarray            # complex g_j
    haps_beam_gain: np.ndarray
    fspl: np.ndarray
    aleph: np.ndarray
    slant_distance_m: np.ndarray
    fading: FadingSample


def access_link_budget(user_xy, carrier_freq_hz, nib_xy, altitude_m, hpbw_deg, env: Environment, g_max: float) -> LinkBudget:
    """
    Large-scale access budget for arrays of (user, NIB) pairs

    Args:
        user_xy: (K, 2) user positions
        carrier_freq_hz: (K,) or scalar carrier of the demanded RAT
        nib_xy: (K, 2) or (2,) serving beam centres
        altitude_m: (K,) or scalar NIB altitudes
        hpbw_deg: (K,) or scalar half-power beamwidths
        env: Propagation environment
        g_max: Boresight gain, linear

    Returns:
        LinkBudget with one entry per pair
    """
    horizontal = np.linalg.norm(np.asarray(user_xy, dtype=float) - np.asarray(nib_xy, dtype=float), axis=-1)
    altitude = np.broadcast_to(np.asarray(altitude_m, dtype=float), horizontal.shape)
    distance = np.hypot(horizontal, altitude)
    off_axis = off_axis_angle_deg(horizontal, altitude)
    beam = al_beam_gain(off_axis, hpbw_deg, g_max)
    loss_db = al_path_loss(distance, altitude, carrier_freq_hz, env)
    return LinkBudget(
        beam_gain=np.asarray(beam, dtype=float),
        path_loss=np.asarray(db_to_linear(loss_db), dtype=float),
        elevation_deg=np.asarray(elevation_deg(distance, altitude), dtype=float),
        off_axis_deg=np.asarray(off_axis, dtype=float),
        distance_m=distance,
    )


def draw_access_gains(mean_gain, n_antennas: int, rng: np.random.Generator, rayleigh_scale: float) -> np.ndarray:
    """
    Per-antenna complex gains h = h_tilde * sqrt(G/L)

    Returns:
        (K, M) complex array with M independent Rayleigh draws per link
    """
    mean_gain = np.asarray(mean_gain, dtype=float)
    fading = sample_rayleigh(rayleigh_scale, rng, size=mean_gain.shape + (n_antennas,))
    return fading.coefficients * np.sqrt(mean_gain)[..., np.newaxis]


def build_access_channel(
    user: GroundUser,
    nib: NibNode,
    rat: RatProfile,
    env: Environment,
    rng: np.random.Generator,
    nib_config: NibConfig,
    rayleigh_scale: float = 1.0 / np.sqrt(2.0),
    fading: Optional[FadingSample] = None,
) -> AccessChannel:
    """
    Assemble one access channel

    Args:
        user: Ground user
        nib: Serving NIB with finalized geometry
        rat: Demanded RAT
        env: Propagation environment
        rng: Generator for the fading draw
        nib_config: Antenna count and boresight gain
        rayleigh_scale: Per-component fading std
        fading: Explicit fading coefficients (length M) replacing the random draw

    Returns:
        AccessChannel with |h_m|^2 = |h_tilde_m|^2 G / L
    """
    budget = access_link_budget(
        np.asarray(user.position), rat.carrier_freq_hz, np.asarray(nib.center),
        nib.altitude_m, nib.hpbw_deg, env, nib_config.g_max_linear,
    )
    if fading is None:
        fading = sample_rayleigh(rayleigh_scale, rng, size=nib_config.n_antennas)
    gains = np.atleast_1d(fading.coefficients) * np.sqrt(float(budget.mean_gain))
    return AccessChannel(
        gains=gains,
        beam_gain=float(budget.beam_gain),
        path_loss=float(budget.path_loss),
        elevation_deg=float(budget.elevation_deg),
        distance_m=float(budget.distance_m),
    )


def draw_backhaul(
    nib_xy,
    nib_altitude_m,
    haps: HapsConfig,
    noise_figure_db: float,
    k_factor: float,
    rng: np.random.Generator,
    tx_power_w: Optional[float] = None,
    fading: Optional[FadingSample] = None,
) -> BackhaulChannel:
    """
    Backhaul channels and normalized noise aleph_j for a fleet

    Args:
        nib_xy: (J, 2) or (2,) NIB ground positions
        nib_altitude_m: (J,) or scalar NIB altitudes
        haps: HAPS configuration
        noise_figure_db: NIB receiver noise figure
        k_factor: Rician K_s
        rng: Generator for the fading draw
        tx_power_w: P_H; defaults to the HAPS constant power
        fading: Explicit fading coefficients replacing the random draw

    Returns:
        BackhaulChannel with aleph_j = sigma^2 L / (P_H |g_tilde|^2 G)
    """
    nib_xy = np.asarray(nib_xy, dtype=float)
    altitude = np.asarray(nib_altitude_m, dtype=float)
    power = haps.tx_power_w if tx_power_w is None else tx_power_w
    offset = np.linalg.norm(nib_xy - np.asarray(haps.center, dtype=float), axis=-1)
    slant = np.hypot(offset, haps.altitude_m - altitude)
    gain = haps_beam_gain(nib_xy, haps.center, haps.altitude_m, altitude, haps.aperture_efficiency, haps.hpbw_deg)
    loss = haps_fspl(slant, haps.wavelength_m)
    if fading is None:
        fading = sample_rician(k_factor, 1.0, rng, size=np.shape(offset) or None)
    noise = noise_power_w(haps.bandwidth_hz, noise_figure_db)
    aleph = noise * np.asarray(loss) / (power * fading.power * np.asarray(gain))
    return BackhaulChannel(
        gain=fading.coefficients * np.sqrt(np.asarray(gain) / np.asarray(loss)),
        haps_beam_gain=np.asarray(gain),
        fspl=np.asarray(loss),
        aleph=np.asarray(aleph),
        slant_distance_m=np.asarray(slant),
        fading=fading,
    )


def build_backhaul_channel(
    nib: NibNode,
    haps: HapsConfig,
    rng: np.random.Generator,
    noise_figure_db: float = 5.0,
    k_factor: float = 10.0,
    tx_power_w: Optional[float] = None,
    fading: Optional[FadingSample] = None,
) -> BackhaulChannel:
    """Backhaul channel of a single NIB"""
    return draw_backhaul(
        np.asarray(nib.center, dtype=float), nib.altitude_m, haps,
        noise_figure_db, k_factor, rng, tx_power_w=tx_power_w, fading=fading,
    )
