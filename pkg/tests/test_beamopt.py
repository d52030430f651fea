import math
from itertools import combinations

import numpy as np
import pytest
from numpy.testing import assert_allclose

from nib_planner.beamopt import (
    BEAM_FLOOR_FACTOR,
    beam_objective_db,
    edge_path_loss_db,
    edge_path_loss_slope,
    finalize_geometry,
    min_enclosing_circle,
    min_enclosing_circle_qp,
    optimal_elevation,
    optimize_beam,
    welzl,
)
from nib_planner.errors import GeometryInfeasibleError
from nib_planner.models.schemas import Environment, NibConfig, RatProfile

RAT = RatProfile(id="RAT-A", carrier_freq_hz=2e9, bandwidth_hz=10e6, demand_prob=1.0)


@pytest.fixture
def suburban():
    return Environment(preset="sub-urban")


def _brute_force_radius(points):
    """Smallest radius over all two- and three-point circles that enclose everything"""
    best = math.inf
    candidates = []
    for a, b in combinations(points, 2):
        center = (a + b) / 2.0
        candidates.append(center)
    for a, b, c in combinations(points, 3):
        d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
        if abs(d) < 1e-12:
            continue
        ux = (a @ a * (b[1] - c[1]) + b @ b * (c[1] - a[1]) + c @ c * (a[1] - b[1])) / d
        uy = (a @ a * (c[0] - b[0]) + b @ b * (a[0] - c[0]) + c @ c * (b[0] - a[0])) / d
        candidates.append(np.array([ux, uy]))
    for center in candidates:
        best = min(best, float(np.max(np.linalg.norm(points - center, axis=1))))
    return best


@pytest.mark.parametrize("seed", range(5))
def test_welzl_matches_brute_force(seed):
    points = np.random.default_rng(seed).uniform(-500.0, 500.0, size=(9, 2))
    center, radius = min_enclosing_circle(points)
    assert_allclose(radius, _brute_force_radius(points), rtol=1e-9)
    assert np.all(np.linalg.norm(points - center, axis=1) <= radius * (1.0 + 1e-12))


def test_enclosing_circle_degenerate_sets():
    center, radius = min_enclosing_circle(np.array([[3.0, 4.0]]))
    assert_allclose(center, [3.0, 4.0])
    assert radius == 0.0
    center, radius = min_enclosing_circle(np.array([[0.0, 0.0], [2.0, 0.0]]))
    assert_allclose(center, [1.0, 0.0])
    assert_allclose(radius, 1.0)
    # collinear points
    center, radius = min_enclosing_circle(np.array([[0.0, 0.0], [1.0, 0.0], [4.0, 0.0], [2.0, 0.0]]))
    assert_allclose(center, [2.0, 0.0])
    assert_allclose(radius, 2.0)
    with pytest.raises(ValueError):
        min_enclosing_circle(np.zeros((0, 2)))


def test_welzl_is_deterministic():
    points = np.random.default_rng(4).normal(size=(50, 2))
    assert welzl(points) == welzl(points)


def test_dual_qp_agrees_with_welzl():
    points = np.random.default_rng(11).uniform(0.0, 100.0, size=(12, 2))
    center, radius = min_enclosing_circle(points)
    dual = min_enclosing_circle_qp(points)
    assert_allclose(dual.center, center, atol=1e-3)
    assert_allclose(dual.radius, radius, rtol=1e-3)
    assert_allclose(dual.kappa.sum(), 1.0)
    assert_allclose(dual.dual_radius, radius, rtol=1e-2)
    qp_center, _ = min_enclosing_circle(points, method="qp")
    assert_allclose(qp_center, dual.center)


def test_slope_matches_numerical_derivative(suburban):
    for phi in (20.0, 45.0, 70.0):
        h = 1e-4
        numeric = (edge_path_loss_db(phi + h, 500.0, suburban, 2e9) - edge_path_loss_db(phi - h, 500.0, suburban, 2e9)) / (2 * h)
        assert_allclose(edge_path_loss_slope(phi, suburban), numeric, rtol=1e-5)


def test_optimal_elevation_is_a_stationary_minimum(suburban):
    phi = optimal_elevation(500.0, suburban, 2e9)
    assert 30.0 < phi < 70.0
    assert_allclose(edge_path_loss_slope(phi, suburban), 0.0, atol=1e-9)
    at = edge_path_loss_db(phi, 500.0, suburban, 2e9)
    assert edge_path_loss_db(phi - 1.0, 500.0, suburban, 2e9) > at
    assert edge_path_loss_db(phi + 1.0, 500.0, suburban, 2e9) > at


def test_optimal_elevation_ignores_radius_and_carrier(suburban):
    assert_allclose(optimal_elevation(100.0, suburban, 2e9), optimal_elevation(5000.0, suburban, 3.5e9))


def test_optimal_elevation_without_excess_gap_clamps():
    flat = Environment(eta_los_db=2.0, eta_nlos_db=2.0)
    assert optimal_elevation(500.0, flat, bracket=(1.0, 89.0)) == 1.0
    with pytest.raises(ValueError):
        optimal_elevation(0.0, flat)


def test_geometry_follows_elevation():
    geometry = finalize_geometry(((0.0, 0.0), 300.0), 50.0, NibConfig(), RAT)
    assert geometry.adjustments == []
    assert_allclose(geometry.altitude_m, 300.0 * math.tan(math.radians(50.0)))
    assert_allclose(geometry.hpbw_deg, 40.0)
    assert geometry.radius_m == 300.0


def test_geometry_clamps_altitude():
    high = finalize_geometry(((0.0, 0.0), 5000.0), 50.0, NibConfig(), RAT)
    assert high.altitude_m == 5000.0
    assert "altitude_max" in high.adjustments
    assert_allclose(high.hpbw_deg, 45.0)
    low = finalize_geometry(((0.0, 0.0), 50.0), 50.0, NibConfig(), RAT)
    assert low.altitude_m == 100.0
    assert "altitude_min" in low.adjustments


def test_single_user_beam_gets_the_floor_radius():
    geometry = finalize_geometry(((5.0, 5.0), 0.0), 50.0, NibConfig(), RAT)
    floor = BEAM_FLOOR_FACTOR * RAT.wavelength_m * 100.0 / 0.5
    assert geometry.altitude_m == 100.0
    assert_allclose(geometry.radius_m, floor)
    assert "single_point" in geometry.adjustments
    assert "radius_floor" in geometry.adjustments
    assert 5.0 <= geometry.hpbw_deg <= 60.0


def test_narrow_beam_widens_radius():
    nib = NibConfig(hpbw_bounds_deg=(20.0, 60.0))
    geometry = finalize_geometry(((0.0, 0.0), 10.0), 50.0, nib, RAT)
    assert "beamwidth_min" in geometry.adjustments
    assert_allclose(geometry.hpbw_deg, 20.0)
    assert geometry.radius_m > 10.0


def test_infeasible_bounds_raise():
    nib = NibConfig(altitude_bounds_m=(100.0, 200.0), hpbw_bounds_deg=(5.0, 10.0))
    with pytest.raises(GeometryInfeasibleError) as exc_info:
        finalize_geometry(((0.0, 0.0), 5000.0), 50.0, nib, RAT, nib_id=3)
    assert exc_info.value.report.stage == "beamopt"
    assert exc_info.value.report.nib_ids == [3]


def test_optimize_beam_covers_members_and_never_gets_worse(suburban):
    members = np.array([[100.0, 0.0], [150.0, 40.0], [120.0, -60.0]])
    freq = np.full(3, 2e9)
    nib = NibConfig()
    initial = finalize_geometry(((0.0, 0.0), 300.0), 50.0, nib, RAT)
    result = optimize_beam(members, freq, initial, 50.0, nib, [RAT], suburban, iterations=2, nib_id=0)
    d = np.linalg.norm(members - result.center, axis=1)
    assert np.all(d <= result.radius_m + 1e-9)
    before = beam_objective_db(initial, members, freq, suburban, nib.g_max_linear)
    after = beam_objective_db(result, members, freq, suburban, nib.g_max_linear)
    assert after >= before


def test_optimize_beam_without_initial_geometry(suburban):
    members = np.array([[0.0, 0.0], [200.0, 0.0]])
    result = optimize_beam(members, np.full(2, 2e9), None, 50.0, NibConfig(), [RAT], suburban)
    assert_allclose(result.center, [100.0, 0.0])
    assert_allclose(result.radius_m, 100.0)
    with pytest.raises(ValueError):
        optimize_beam(np.zeros((0, 2)), np.zeros(0), None, 50.0, NibConfig(), [RAT], suburban)
