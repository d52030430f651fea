import numpy as np
import pytest
from numpy.testing import assert_allclose

from nib_planner.access import (
    AccessProblem,
    CellChannels,
    access_rates,
    default_regularization,
    idealized_rates,
    rate_gradient,
    rzf_precoder,
    sca_allocate,
    uniform_allocation,
)
from nib_planner.errors import BackhaulInfeasibleError, QosInfeasibleError
from nib_planner.guardrails import check_access


def _problem(gain, backhaul, cell=None, bandwidth=1e6, min_rate=1e5, cell_nib=None):
    gain = np.asarray(gain, dtype=float)
    k = gain.size
    cell = np.zeros(k, dtype=int) if cell is None else np.asarray(cell)
    n_cells = int(cell.max()) + 1
    return AccessProblem(
        users=np.arange(k),
        cell=cell,
        gain=gain,
        bandwidth_hz=np.full(k, bandwidth),
        min_rate_bps=np.full(k, min_rate),
        backhaul_dependent=np.asarray(backhaul, dtype=bool),
        cell_nib=np.arange(n_cells) if cell_nib is None else np.asarray(cell_nib),
    )


def _rate(p, c, bandwidth=1e6):
    return bandwidth * np.log2(1.0 + c * p)


def _complex_channel(rng, m, k):
    return (rng.normal(size=(m, k)) + 1j * rng.normal(size=(m, k))) / np.sqrt(2.0)


def test_rzf_is_normalized_and_zero_forcing_without_regularization(rng):
    H = _complex_channel(rng, 4, 3)
    state = rzf_precoder(H, 0.0)
    assert_allclose(np.real(np.trace(state.W.conj().T @ state.W)), 1.0)
    off_diagonal = state.cross - np.diag(np.diag(state.cross))
    assert_allclose(off_diagonal, 0.0, atol=1e-20)
    assert np.all(state.effective > 0)


def test_rzf_with_more_users_than_antennas(rng):
    H = _complex_channel(rng, 2, 5)
    state = rzf_precoder(H, 0.1)
    assert state.W.shape == (2, 5)
    assert_allclose(np.real(np.trace(state.W.conj().T @ state.W)), 1.0)
    assert state.n_users == 5
    assert state.n_antennas == 2


def test_rzf_forms_agree(rng):
    # push-through identity: (H H^H + w I)^-1 H = H (H^H H + w I)^-1
    H = _complex_channel(rng, 3, 3)
    state = rzf_precoder(H, 0.5)
    raw = np.linalg.solve(H @ H.conj().T + 0.5 * np.eye(3), H)
    expected = raw / np.sqrt(np.real(np.trace(raw.conj().T @ raw)))
    assert_allclose(state.W, expected, atol=1e-12)


def test_rank_deficient_channel_needs_regularization():
    h = np.array([[1.0 + 0.5j], [0.3 - 0.2j]])
    H = np.hstack([h, h])
    with pytest.raises(ValueError):
        rzf_precoder(H, 0.0)
    assert rzf_precoder(H, 1e-3).zeta > 0
    with pytest.raises(ValueError):
        rzf_precoder(H, -1.0)


def test_default_regularization():
    assert_allclose(default_regularization(4, 1e-12, 10.0), 4e-13)


def test_sca_without_backhaul_matches_a_grid_search():
    problem = _problem([1000.0, 100.0], [False, False])
    allocation = sca_allocate(problem)
    pmin = problem.min_power
    p1 = np.linspace(pmin[0], 1.0 - pmin[1], 200_001)
    best = np.max(_rate(p1, 1000.0) + _rate(1.0 - p1, 100.0))
    assert allocation.sum_rate_bps >= best * (1.0 - 1e-9)
    assert_allclose(allocation.power.sum(), 1.0)
    assert allocation.qos_met.all()
    assert allocation.backhaul_met


def test_sca_respects_a_binding_backhaul_cap():
    problem = _problem([1000.0, 100.0], [True, False])
    cap = 5e6
    allocation = sca_allocate(problem, cap)
    assert allocation.rates_bps[0] <= cap * (1.0 + 1e-9)
    assert allocation.backhaul_met
    assert np.all(np.diff(allocation.objective_trace) >= 0)
    # the unconstrained user takes the rest of the cell budget
    p1 = np.linspace(0.0, 1.0, 100_001)
    feasible = _rate(p1, 1000.0) <= cap
    best = np.max((_rate(p1, 1000.0) + _rate(1.0 - p1, 100.0))[feasible])
    assert allocation.sum_rate_bps >= best * (1.0 - 1e-4)
    assert allocation.sum_rate_bps <= best * (1.0 + 1e-4)
    assert check_access(
        problem.cell, allocation.power, problem.gain, problem.bandwidth_hz, problem.min_rate_bps,
        group=allocation.backhaul_group, caps=allocation.backhaul_caps_bps,
    ) == []


def test_sca_per_nib_caps():
    problem = _problem([500.0, 800.0, 50.0, 60.0], [True, True, True, False], cell=[0, 0, 1, 1])
    caps = np.array([3e6, 1e9])
    allocation = sca_allocate(problem, caps, mode="per_nib")
    load = allocation.backhaul_load_bps
    assert load.shape == (2,)
    assert load[0] <= 3e6 * (1.0 + 1e-9)
    assert allocation.backhaul_met
    for c in (0, 1):
        assert allocation.power[problem.cell == c].sum() <= 1.0 + 1e-9


def test_qos_infeasible_cell():
    problem = _problem([1e-3, 1e-3], [False, False], min_rate=1e6)
    with pytest.raises(QosInfeasibleError) as exc_info:
        sca_allocate(problem)
    assert exc_info.value.report.stage == "access"
    assert exc_info.value.report.nib_ids == [0]


def test_backhaul_infeasible_floor():
    problem = _problem([1000.0, 1000.0], [True, True], min_rate=1e6)
    with pytest.raises(BackhaulInfeasibleError):
        sca_allocate(problem, 1.5e6)


def test_uniform_allocation_splits_each_cell():
    problem = _problem([10.0, 20.0, 30.0], [False, False, False], cell=[0, 0, 1])
    upa = uniform_allocation(problem)
    assert_allclose(upa.power, [0.5, 0.5, 1.0])
    assert upa.method == "upa"
    assert sca_allocate(problem).sum_rate_bps >= upa.sum_rate_bps


def test_empty_problem():
    problem = AccessProblem.from_cells([], np.zeros(0, dtype=bool), np.array([1e5]))
    allocation = sca_allocate(problem, 1e6)
    assert allocation.power.size == 0
    assert allocation.sum_rate_bps == 0.0


def test_problem_from_cells_and_actual_rates(rng):
    cells = []
    users = [np.array([0, 2]), np.array([1])]
    for nib, members in enumerate(users):
        H = _complex_channel(rng, 2, members.size) * 1e-4
        cells.append(CellChannels(
            nib=nib, rat_index=0, users=members, precoding=rzf_precoder(H, 1e-10),
            snr=np.full(members.size, 1e12), bandwidth_hz=10e6,
        ))
    problem = AccessProblem.from_cells(cells, np.array([True, False, True]), np.array([1e5]))
    assert problem.size == 3
    assert problem.n_cells == 2
    assert_allclose(problem.users, [0, 2, 1])
    assert_allclose(problem.backhaul_dependent, [True, True, False])
    allocation = sca_allocate(problem)
    rates = access_rates(allocation, problem)
    assert np.all(rates.actual_bps <= rates.ideal_bps * (1.0 + 1e-12))
    assert_allclose(rates.ideal_bps, allocation.rates_bps)
    assert rates.gap_bps >= 0.0


def test_rate_gradient_matches_central_differences(rng):
    power = rng.uniform(0.01, 1.0, 8)
    gain = 10.0 ** rng.uniform(0.0, 4.0, 8)
    bandwidth = rng.choice([5e6, 10e6, 20e6], 8)
    step = 1e-6 * power
    numeric = (idealized_rates(power + step, gain, bandwidth) - idealized_rates(power - step, gain, bandwidth)) / (2.0 * step)
    assert_allclose(rate_gradient(power, gain, bandwidth), numeric, rtol=1e-6)
