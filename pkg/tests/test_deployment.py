from itertools import combinations

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from nib_planner.deployment import (
    coverage_matrix,
    deploy,
    gdc_exact,
    gdc_greedy,
    gdc_lattice,
    hex_baseline,
    lp_lower_bound,
    prune_redundant,
)
from nib_planner.errors import ExactCoverCapError, InfeasibleError
from nib_planner.models.schemas import DeploymentSettings


def _covers(positions, centers, r, tol=1e-9):
    d = np.linalg.norm(positions[:, None, :] - centers[None, :, :], axis=2)
    return bool(np.all(d.min(axis=1) <= r + tol))


def _brute_force_cover(positions, r):
    dense = coverage_matrix(positions, r).dense()
    k = dense.shape[0]
    for size in range(1, k + 1):
        for subset in combinations(range(k), size):
            if dense[:, list(subset)].any(axis=1).all():
                return size
    return k


def test_coverage_matrix_boundary_is_inclusive():
    positions = np.array([[0.0, 0.0], [3.0, 4.0], [20.0, 0.0]])
    D = coverage_matrix(positions, 5.0)
    dense = D.dense()
    assert dense[0, 1] and dense[1, 0]
    assert not dense[0, 2]
    assert np.all(np.diag(dense))
    assert_array_equal(dense, dense.T)
    with pytest.raises(ValueError):
        coverage_matrix(positions, 0.0)


def test_greedy_covers_everyone(rng):
    positions = rng.uniform(-1000.0, 1000.0, size=(200, 2))
    plan = gdc_greedy(coverage_matrix(positions, 250.0))
    assert plan.method == "gdc-greedy"
    assert _covers(positions, plan.centers, 250.0)
    # centres are user positions
    assert_array_equal(plan.centers, positions[plan.center_ids])


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_exact_cover_matches_enumeration(seed):
    positions = np.random.default_rng(seed).uniform(0.0, 1000.0, size=(11, 2))
    D = coverage_matrix(positions, 300.0)
    plan = gdc_exact(D)
    assert plan.n_nibs == _brute_force_cover(positions, 300.0)
    assert _covers(positions, plan.centers, 300.0)
    assert lp_lower_bound(D) <= plan.n_nibs <= gdc_greedy(D).n_nibs


def test_exact_cover_refuses_large_instances(rng):
    D = coverage_matrix(rng.uniform(0.0, 100.0, size=(25, 2)), 10.0)
    with pytest.raises(ExactCoverCapError):
        gdc_exact(D, budget=20)


def test_prune_drops_redundant_disks():
    members = [np.array([0, 1]), np.array([1]), np.array([2])]
    assert prune_redundant(members, 3) == [0, 2]
    # equal sizes: the later selection goes first
    assert prune_redundant([np.array([0]), np.array([0])], 1) == [0]


def test_lattice_cover_is_feasible(rng):
    positions = rng.uniform(-3000.0, 3000.0, size=(2000, 2))
    plan = gdc_lattice(positions, 400.0)
    assert plan.method == "gdc-lattice"
    assert _covers(positions, plan.centers, 400.0)
    assert_array_equal(plan.centers, positions[plan.center_ids])
    assert len(set(plan.center_ids.tolist())) == plan.n_nibs


def test_hex_baseline_covers_the_disk():
    plan = hex_baseline(1000.0, 200.0)
    assert plan.method == "hex"
    grid = np.stack(np.meshgrid(np.linspace(-1000, 1000, 81), np.linspace(-1000, 1000, 81)), axis=-1).reshape(-1, 2)
    inside = grid[np.hypot(grid[:, 0], grid[:, 1]) <= 1000.0]
    assert _covers(inside, plan.centers, 200.0, tol=1e-6)
    # every beam reaches into the coverage disk
    assert np.all(np.hypot(plan.centers[:, 0], plan.centers[:, 1]) < 1200.0)


def test_hex_baseline_single_beam_when_r_exceeds_R():
    plan = hex_baseline(1000.0, 1500.0, center=(10.0, -5.0))
    assert plan.n_nibs == 1
    assert_array_equal(plan.centers[0], [10.0, -5.0])


def test_hex_baseline_grows_as_beams_shrink():
    counts = [hex_baseline(5000.0, r).n_nibs for r in (2500.0, 1000.0, 500.0)]
    assert counts[0] < counts[1] < counts[2]


def test_deploy_auto_uses_exact_for_tiny_instances(rng):
    positions = rng.uniform(0.0, 1000.0, size=(12, 2))
    plan = deploy(positions, 300.0)
    assert plan.method == "gdc-exact"
    assert plan.n_nibs == _brute_force_cover(positions, 300.0)


def test_deploy_auto_large_picks_the_smaller_plan(rng):
    positions = rng.uniform(-2000.0, 2000.0, size=(500, 2))
    plan = deploy(positions, 300.0)
    assert plan.method in ("gdc-greedy", "gdc-lattice")
    assert _covers(positions, plan.centers, 300.0)
    greedy = deploy(positions, 300.0, DeploymentSettings(method="gdc-greedy"))
    lattice = deploy(positions, 300.0, DeploymentSettings(method="gdc-lattice"))
    assert plan.n_nibs == min(greedy.n_nibs, lattice.n_nibs)


def test_deploy_hex_and_empty_population():
    plan = deploy(np.zeros((0, 2)), 500.0, DeploymentSettings(method="hex"), coverage_radius=2000.0)
    assert plan.method == "hex"
    with pytest.raises(InfeasibleError):
        deploy(np.zeros((0, 2)), 500.0)
    with pytest.raises(ValueError):
        deploy(np.zeros((3, 2)), 500.0, DeploymentSettings(method="hex"))


def test_plan_to_dict():
    plan = deploy(np.array([[0.0, 0.0], [1.0, 0.0]]), 5.0)
    data = plan.to_dict()
    assert data["n_nibs"] == 1
    assert data["radius_m"] == 5.0
    assert len(data["centers"]) == len(data["center_user_ids"]) == 1
