import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from nib_planner.metrics import (
    M2_PER_KM2,
    aee_access,
    aee_backhaul,
    ase_backhaul,
    build_metric_bundle,
    jain_index,
    se_avg_access,
    se_avg_backhaul,
    sum_rates,
)


def test_jain_index_values():
    value, degenerate = jain_index([1.0, 2.0, 3.0])
    assert_allclose(value, 36.0 / 42.0)
    assert not degenerate
    assert_allclose(jain_index([5.0, 5.0, 5.0])[0], 1.0)
    assert_allclose(jain_index([0.0, 7.0, 0.0, 0.0])[0], 0.25)


def test_jain_index_edge_cases():
    assert jain_index([0.0, 0.0]) == (1.0, True)
    with pytest.raises(ValueError):
        jain_index([])


def test_sum_rates():
    assert sum_rates([1.0, 2.0], np.array([3.0, 4.0, 5.0])) == (3.0, 12.0)


def test_backhaul_efficiency():
    assert_allclose(aee_backhaul([1e6], [1.0], 9.0, 1.0), 1e5)
    # an unserved NIB still burns circuit power
    assert_allclose(aee_backhaul([1e6, 0.0], [1.0, 0.0], 9.0, 1.0), 0.5e5)
    assert aee_backhaul([], [], 9.0, 1.0) == 0.0
    assert_allclose(se_avg_backhaul([100e6, 300e6], 100e6), 2.0)


def test_area_spectral_efficiency():
    ase = ase_backhaul([100e6], 100e6, 1000.0)
    assert_allclose(ase, 1.0 / (math.pi * 1e6))


def test_access_efficiency():
    assert_allclose(se_avg_access([10e6, 40e6], [10e6, 20e6]), 1.5)
    assert_allclose(aee_access([2e6], [0.5], [10.0], 5.0), 2e5)
    assert se_avg_access([], []) == 0.0


def test_metric_bundle():
    bundle = build_metric_bundle(
        access_rates_bps=[10e6, 20e6],
        access_actual_bps=[9e6, 19e6],
        power_coeffs=[0.5, 0.5],
        access_tx_powers_w=[10.0, 10.0],
        access_bandwidths_hz=[10e6, 10e6],
        backhaul_rates_bps=[50e6],
        backhaul_fractions=[1.0],
        haps_tx_power_w=100.0,
        haps_bandwidth_hz=100e6,
        coverage_radius_m=5000.0,
        circuit_power_access_w=10.0,
        circuit_power_backhaul_w=10.0,
        seed=3,
        config_hash="abc",
    )
    assert_allclose(bundle.sum_rate_access_bps, 30e6)
    assert_allclose(bundle.sum_rate_access_actual_bps, 28e6)
    assert_allclose(bundle.sum_rate_backhaul_bps, 50e6)
    assert_allclose(bundle.ase_backhaul_per_km2, bundle.ase_backhaul * M2_PER_KM2)
    assert_allclose(bundle.jain, 0.9)
    assert not bundle.jain_degenerate
    assert bundle.seed == 3


def test_metric_bundle_without_users():
    bundle = build_metric_bundle(
        [], [], [], [], [], [0.0], [1.0], 100.0, 100e6, 5000.0, 10.0, 10.0,
    )
    assert bundle.jain == 1.0
    assert bundle.jain_degenerate
    assert bundle.sum_rate_access_bps == 0.0
