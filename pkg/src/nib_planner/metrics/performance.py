"""
Performance Metrics
Sum rates, energy and spectral efficiency of both links, and Jain's fairness index
"""

import logging
import math
from typing import Tuple

import numpy as np

from nib_planner.models.schemas import MetricBundle

logger = logging.getLogger(__name__)

M2_PER_KM2 = 1e6


def sum_rates(access_rates_bps, backhaul_rates_bps) -> Tuple[float, float]:
    """(R_a, R_b): total access rate over all users and total backhaul rate over all NIBs"""
    return float(np.sum(access_rates_bps)), float(np.sum(backhaul_rates_bps))


def aee_backhaul(rates_bps, fractions, tx_power_w: float, circuit_power_w: float) -> float:
    """(1/J) sum_j R_j / (f_j P_H + P_c2), bits/J"""
    rates = np.asarray(rates_bps, dtype=float)
    if rates.size == 0:
        return 0.0
    consumed = np.asarray(fractions, dtype=float) * tx_power_w + circuit_power_w
    return float(np.mean(np.divide(rates, consumed, out=np.zeros_like(rates), where=consumed > 0)))


def se_avg_backhaul(rates_bps, bandwidth_hz: float) -> float:
    """(1/J) sum_j R_j / B_H, bps/Hz"""
    rates = np.asarray(rates_bps, dtype=float)
    return float(np.mean(rates) / bandwidth_hz) if rates.size else 0.0


def ase_backhaul(rates_bps, bandwidth_hz: float, coverage_radius_m: float) -> float:
    """SE_avg^b / (pi R^2), bps/Hz/m^2"""
    return se_avg_backhaul(rates_bps, bandwidth_hz) / (math.pi * coverage_radius_m ** 2)


def se_avg_access(rates_bps, bandwidths_hz) -> float:
    """Per-user spectral efficiency R_k / B_k averaged over all users and RATs"""
    rates = np.asarray(rates_bps, dtype=float)
    if rates.size == 0:
        return 0.0
    return float(np.mean(rates / np.asarray(bandwidths_hz, dtype=float)))


def aee_access(rates_bps, power_coeffs, tx_powers_w, circuit_power_w: float) -> float:
    """(1/K) sum_k R_k / (p_k P_j^omega + P_c1), bits/J"""
    rates = np.asarray(rates_bps, dtype=float)
    if rates.size == 0:
        return 0.0
    consumed = np.asarray(power_coeffs, dtype=float) * np.asarray(tx_powers_w, dtype=float) + circuit_power_w
    return float(np.mean(np.divide(rates, consumed, out=np.zeros_like(rates), where=consumed > 0)))


def jain_index(rates_bps) -> Tuple[float, bool]:
    """
    Jain's fairness index (sum R)^2 / (K sum R^2)

    Returns:
        (index, degenerate); all-zero rates give (1.0, True)
    """
    rates = np.asarray(rates_bps, dtype=float)
    if rates.size == 0:
        raise ValueError("Jain index needs at least one rate")
    squares = float(np.sum(rates ** 2))
    if squares == 0.0:
        return 1.0, True
    return min(float(np.sum(rates) ** 2 / (rates.size * squares)), 1.0), False


def build_metric_bundle(
    access_rates_bps,
    access_actual_bps,
    power_coeffs,
    access_tx_powers_w,
    access_bandwidths_hz,
    backhaul_rates_bps,
    backhaul_fractions,
    haps_tx_power_w: float,
    haps_bandwidth_hz: float,
    coverage_radius_m: float,
    circuit_power_access_w: float,
    circuit_power_backhaul_w: float,
    seed: int = 0,
    trials: int = 1,
    config_hash: str = "",
) -> MetricBundle:
    """Evaluate every metric for one allocated epoch"""
    access = np.asarray(access_rates_bps, dtype=float)
    r_a, r_b = sum_rates(access, backhaul_rates_bps)
    ase = ase_backhaul(backhaul_rates_bps, haps_bandwidth_hz, coverage_radius_m)
    if access.size:
        jain, degenerate = jain_index(access)
    else:
        jain, degenerate = 1.0, True
    bundle = MetricBundle(
        sum_rate_access_bps=r_a,
        sum_rate_access_actual_bps=float(np.sum(access_actual_bps)),
        sum_rate_backhaul_bps=r_b,
        aee_backhaul=aee_backhaul(backhaul_rates_bps, backhaul_fractions, haps_tx_power_w, circuit_power_backhaul_w),
        se_avg_backhaul=se_avg_backhaul(backhaul_rates_bps, haps_bandwidth_hz),
        ase_backhaul=ase,
        ase_backhaul_per_km2=ase * M2_PER_KM2,
        aee_access=aee_access(access, power_coeffs, access_tx_powers_w, circuit_power_access_w),
        se_avg_access=se_avg_access(access, access_bandwidths_hz),
        jain=jain,
        jain_degenerate=degenerate,
        seed=seed,
        trials=trials,
        config_hash=config_hash,
    )
    logger.debug(f"Metrics: R_a={r_a / 1e6:.2f} Mbps, R_b={r_b / 1e6:.2f} Mbps, Jain={jain:.3f}")
    return bundle
