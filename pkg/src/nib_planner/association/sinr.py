"""
Association-Stage SINR
Candidate (user, NIB) links and the pre-allocation SINR proxy used to rank them
"""

import logging
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from nib_planner.channel.links import access_link_budget, draw_access_gains
from nib_planner.channel.units import noise_power_w
from nib_planner.models.schemas import Environment, NibConfig, RatProfile
from nib_planner.scenario.users import UserPopulation

logger = logging.getLogger(__name__)

COVERAGE_TOL_M = 1e-9


@dataclass(frozen=True)
class CandidateLinks:
    """Every (user, NIB) pair with the user inside the NIB's disk, sorted by user then NIB"""

    user: np.ndarray                   # (P,)
    nib: np.ndarray                    # (P,)
    distance_m: np.ndarray             # (P,) horizontal distance to the beam centre
    gains: Optional[np.ndarray] = None  # (P, M) complex h_kj
    snr: Optional[np.ndarray] = None    # (P,) gamma_bar_k
    sinr: Optional[np.ndarray] = None   # (P,) linear

    @property
    def size(self) -> int:
        return int(self.user.shape[0])

    def uncovered(self, n_users: int) -> np.ndarray:
        return np.setdiff1d(np.arange(n_users), self.user)


def build_candidates(positions: np.ndarray, centers: np.ndarray, radii) -> CandidateLinks:
    """
    Find the covering NIBs of every user

    Args:
        positions: (K, 2) user positions
        centers: (J, 2) beam centres
        radii: (J,) or scalar beam radii

    Returns:
        CandidateLinks without channels
    """
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    radii = np.broadcast_to(np.asarray(radii, dtype=float), (centers.shape[0],))
    if positions.shape[0] == 0 or centers.shape[0] == 0:
        empty = np.zeros(0, dtype=int)
        return CandidateLinks(user=empty, nib=empty, distance_m=np.zeros(0))

    tree = cKDTree(centers)
    hits = tree.query_ball_point(positions, r=float(radii.max()) + 1e-6)
    user = np.repeat(np.arange(positions.shape[0]), [len(h) for h in hits])
    nib = np.fromiter((j for h in hits for j in h), dtype=int, count=user.shape[0])
    distance = np.hypot(*(positions[user] - centers[nib]).T) if user.size else np.zeros(0)
    inside = distance <= radii[nib] + COVERAGE_TOL_M
    user, nib, distance = user[inside], nib[inside], distance[inside]
    order = np.lexsort((nib, user))
    return CandidateLinks(user=user[order], nib=nib[order], distance_m=distance[order])


def estimate_association_sinr(
    h: np.ndarray,
    w: np.ndarray,
    snr: float,
    power: float = 1.0,
    interferers: Sequence[np.ndarray] = (),
    interferer_powers: Optional[Sequence[float]] = None,
) -> float:
    """
    SINR of one user under a candidate NIB before power allocation

    gamma = snr p |h^H w|^2 / (snr sum_l p_l |h^H w_l|^2 + 1)

    Args:
        h: (M,) channel of the user from the candidate NIB
        w: (M,) unit-norm precoder of the user
        snr: gamma_bar = P / sigma^2
        power: Provisional power coefficient of the user
        interferers: Precoders of co-RAT users in the same cell
        interferer_powers: Their provisional powers (default: `power` each)

    Returns:
        Linear SINR
    """
    h = np.asarray(h, dtype=complex)
    signal = power * abs(np.vdot(h, w)) ** 2
    if interferer_powers is None:
        interferer_powers = [power] * len(interferers)
    interference = sum(p * abs(np.vdot(h, wl)) ** 2 for p, wl in zip(interferer_powers, interferers))
    return float(snr * signal / (snr * interference + 1.0))


def association_sinrs(gains: np.ndarray, snr: np.ndarray, groups: np.ndarray, interference: bool = True) -> np.ndarray:
    """
    Vectorized association SINR with MRT precoders and uniform provisional power

    Links sharing a group id (same NIB, same RAT) interfere with each other; each
    gets power 1/n for a group of n links.

    Args:
        gains: (P, M) complex channels
        snr: (P,) gamma_bar of each link's user
        groups: (P,) group id per link
        interference: False gives the noise-limited proxy

    Returns:
        (P,) linear SINR
    """
    norm_sq = np.sum(np.abs(gains) ** 2, axis=1)
    sinr = np.zeros(gains.shape[0])
    _, inverse, counts = np.unique(groups, return_inverse=True, return_counts=True)
    for g in range(counts.shape[0]):
        idx = np.flatnonzero(inverse == g)
        p = 1.0 / counts[g]
        H = gains[idx]
        signal = p * norm_sq[idx]
        if interference and idx.size > 1:
            W = H / np.sqrt(norm_sq[idx])[:, np.newaxis]
            Q = p * (W.T @ W.conj())
            received = np.real(np.einsum("nm,mk,nk->n", H.conj(), Q, H))
            interf = np.clip(received - signal, 0.0, None)
        else:
            interf = np.zeros(idx.size)
        sinr[idx] = snr[idx] * signal / (snr[idx] * interf + 1.0)
    return sinr


def score_candidates(
    links: CandidateLinks,
    population: UserPopulation,
    centers: np.ndarray,
    altitude_m,
    hpbw_deg,
    rats: Sequence[RatProfile],
    env: Environment,
    nib_config: NibConfig,
    rng: np.random.Generator,
    rayleigh_scale: float = 1.0 / np.sqrt(2.0),
    fading: bool = True,
    interference: bool = True,
) -> CandidateLinks:
    """
    Draw channels for every candidate link and rank them by association SINR

    Args:
        links: Output of build_candidates
        population: Users
        centers: (J, 2) beam centres
        altitude_m: (J,) or scalar provisional altitudes
        hpbw_deg: (J,) or scalar provisional beamwidths
        rats: Scenario RAT list (indexed by population.rat_index)
        env: Propagation environment
        nib_config: Antennas, boresight gain and per-RAT powers
        rng: Fading generator
        rayleigh_scale: Per-component fading std
        fading: False replaces the Rayleigh draw with unit gains on every antenna
        interference: Include co-RAT co-cell interference

    Returns:
        CandidateLinks with gains, snr and sinr filled in
    """
    if links.size == 0:
        return replace(links, gains=np.zeros((0, nib_config.n_antennas), dtype=complex), snr=np.zeros(0), sinr=np.zeros(0))
    n_nibs = np.asarray(centers).reshape(-1, 2).shape[0]
    altitude = np.broadcast_to(np.asarray(altitude_m, dtype=float), (n_nibs,))
    hpbw = np.broadcast_to(np.asarray(hpbw_deg, dtype=float), (n_nibs,))
    rat_index = population.rat_index[links.user]
    freq = np.array([rat.carrier_freq_hz for rat in rats])[rat_index]
    budget = access_link_budget(
        population.positions[links.user], freq, np.asarray(centers, dtype=float)[links.nib],
        altitude[links.nib], hpbw[links.nib], env, nib_config.g_max_linear,
    )
    if fading:
        gains = draw_access_gains(budget.mean_gain, nib_config.n_antennas, rng, rayleigh_scale)
    else:
        gains = np.repeat(np.sqrt(budget.mean_gain)[:, np.newaxis], nib_config.n_antennas, axis=1).astype(complex)

    bandwidth = np.array([rat.bandwidth_hz for rat in rats])[rat_index]
    tx_power = np.array([nib_config.tx_power_w(rat.id) for rat in rats])[rat_index]
    noise = noise_power_w(bandwidth, population.noise_figure_db[links.user])
    snr = tx_power / noise
    groups = links.nib * len(rats) + rat_index
    sinr = association_sinrs(gains, snr, groups, interference=interference)
    logger.debug(f"Scored {links.size} candidate links for {population.size} users")
    return replace(links, gains=gains, snr=snr, sinr=sinr)
