"""
Unit conversions and thermal noise
"""

import numpy as np

THERMAL_NOISE_DBM_PER_HZ = -174.0


def db_to_linear(value_db):
    return np.power(10.0, np.asarray(value_db, dtype=float) / 10.0)


def linear_to_db(value):
    return 10.0 * np.log10(np.asarray(value, dtype=float))


def dbm_to_watts(value_dbm):
    return np.power(10.0, (np.asarray(value_dbm, dtype=float) - 30.0) / 10.0)


def watts_to_dbm(value_w):
    return 10.0 * np.log10(np.asarray(value_w, dtype=float)) + 30.0


def dbw_to_watts(value_dbw):
    return np.power(10.0, np.asarray(value_dbw, dtype=float) / 10.0)


def noise_power_dbm(bandwidth_hz, nf_db=0.0):
    """
    Thermal noise power over a bandwidth

    Args:
        bandwidth_hz: Receiver bandwidth B (Hz), must be positive
        nf_db: Receiver noise figure (dB)

    Returns:
        -174 + 10*log10(B) + NF in dBm
    """
    bandwidth = np.asarray(bandwidth_hz, dtype=float)
    if np.any(bandwidth <= 0):
        raise ValueError("bandwidth must be positive")
    result = THERMAL_NOISE_DBM_PER_HZ + 10.0 * np.log10(bandwidth) + np.asarray(nf_db, dtype=float)
    return float(result) if np.ndim(result) == 0 else result


def noise_power_w(bandwidth_hz, nf_db=0.0):
    """Thermal noise power in watts"""
    result = dbm_to_watts(noise_power_dbm(bandwidth_hz, nf_db))
    return float(result) if np.ndim(result) == 0 else result
