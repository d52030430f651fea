"""
Access Power Allocation
Successive convex approximation of the access sum-rate problem with QoS floors,
per-cell power simplices and the backhaul coupling constraint; uniform baseline
"""

import logging
from dataclasses import dataclass, field
from typing import List, Literal, Optional, Tuple, Union

import numpy as np

from nib_planner.access.problem import AccessProblem, idealized_rates, rate_gradient
from nib_planner.errors import BackhaulInfeasibleError, QosInfeasibleError
from nib_planner.models.schemas import InfeasibilityReport

logger = logging.getLogger(__name__)

BackhaulMode = Literal["global", "per_nib"]

_LN2 = np.log(2.0)
_MU_STEPS = 80
_LAMBDA_STEPS = 50
_SCALE_STEPS = 60
_REL_TOL = 1e-9


@dataclass(frozen=True)
class AccessAllocation:
    """Power coefficients and idealized rates, in AccessProblem user order"""

    users: np.ndarray
    power: np.ndarray
    rates_bps: np.ndarray
    method: str
    qos_met: np.ndarray
    backhaul_met: bool
    backhaul_load_bps: np.ndarray
    backhaul_caps_bps: np.ndarray
    backhaul_group: np.ndarray          # (K,) group per user, -1 when unconstrained
    objective_trace: List[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = True

    @property
    def sum_rate_bps(self) -> float:
        return float(np.sum(self.rates_bps))


@dataclass(frozen=True)
class AccessRates:
    """Idealized (interference-free) and actual (residual RZF leakage) rates per user"""

    users: np.ndarray
    ideal_sinr: np.ndarray
    actual_sinr: np.ndarray
    ideal_bps: np.ndarray
    actual_bps: np.ndarray

    @property
    def gap_bps(self) -> float:
        return float(np.sum(self.ideal_bps) - np.sum(self.actual_bps))


@dataclass(frozen=True)
class _Groups:
    index: np.ndarray    # (K,) group per user, -1 when unconstrained
    caps: np.ndarray     # (G,)
    nibs: List[List[int]]

    @property
    def size(self) -> int:
        return int(self.caps.shape[0])

    def total(self, values: np.ndarray) -> np.ndarray:
        mask = self.index >= 0
        return np.bincount(self.index[mask], weights=values[mask], minlength=self.size)


def _backhaul_groups(
    problem: AccessProblem,
    caps: Optional[Union[float, np.ndarray]],
    mode: BackhaulMode,
) -> _Groups:
    none = _Groups(index=np.full(problem.size, -1), caps=np.zeros(0), nibs=[])
    if caps is None:
        return none
    dependent = problem.backhaul_dependent
    if mode == "global":
        index = np.where(dependent, 0, -1)
        return _Groups(index=index, caps=np.array([float(caps)]), nibs=[sorted(set(problem.cell_nib.tolist()))])
    per_nib = np.asarray(caps, dtype=float)
    user_nib = problem.cell_nib[problem.cell]
    nibs = np.unique(user_nib[dependent])
    lookup = {int(n): g for g, n in enumerate(nibs)}
    index = np.array([lookup[int(n)] if d else -1 for n, d in zip(user_nib, dependent)], dtype=int)
    return _Groups(index=index, caps=per_nib[nibs], nibs=[[int(n)] for n in nibs])


def _check_qos(problem: AccessProblem, pmin: np.ndarray) -> None:
    load = problem.cell_sum(pmin)
    bad_cells = np.flatnonzero((load > 1.0 + _REL_TOL) | (problem.cell_sum((pmin > 1.0).astype(float)) > 0))
    if bad_cells.size == 0:
        return
    users = np.concatenate([problem.users[problem.cell_members(c)] for c in bad_cells])
    nibs = sorted(set(problem.cell_nib[bad_cells].tolist()))
    logger.error(f"QoS infeasible in {bad_cells.size} cell(s) on NIBs {nibs}")
    raise QosInfeasibleError(InfeasibilityReport(
        stage="access",
        reason=f"minimum-rate powers exceed the budget in {bad_cells.size} cell(s)",
        nib_ids=nibs,
        user_ids=[int(u) for u in users],
        details={"max_cell_min_power": float(load[bad_cells].max())},
    ))


def _check_backhaul(problem: AccessProblem, groups: _Groups) -> None:
    floor = groups.total(problem.min_rate_bps)
    short = np.flatnonzero(floor > groups.caps * (1.0 + _REL_TOL))
    if short.size == 0:
        return
    nibs = sorted({n for g in short for n in groups.nibs[g]})
    users = problem.users[np.isin(groups.index, short)]
    logger.error(f"Backhaul infeasible: K1 minimum rates exceed the cap on {short.size} group(s)")
    raise BackhaulInfeasibleError(InfeasibilityReport(
        stage="access",
        reason="backhaul rate below the sum of minimum rates of backhaul-dependent users",
        nib_ids=nibs,
        user_ids=[int(u) for u in users],
        details={"required_bps": float(floor[short].sum()), "cap_bps": float(groups.caps[short].sum())},
    ))


def _water_fill(problem: AccessProblem, pmin: np.ndarray, price: np.ndarray) -> np.ndarray:
    """
    Per-cell maximizer of sum B log2(1 + c p) - price' p on the simplex and box

    p_k = B_k / (ln2 (mu_c + price_k)) - 1/c_k clipped to [p_k^min, 1], with mu_c
    found by bisection; the returned point lies on the feasible side.
    """
    B, c = problem.bandwidth_hz, problem.gain

    def power_at(mu_user: np.ndarray) -> np.ndarray:
        denom = _LN2 * (mu_user + price)
        positive = denom > 0
        raw = np.full(problem.size, np.inf)
        raw[positive] = B[positive] / denom[positive] - 1.0 / c[positive]
        return np.clip(raw, pmin, 1.0)

    zero = np.zeros(problem.size)
    p = power_at(zero)
    need = problem.cell_sum(p) > 1.0
    if not need.any():
        return p
    lo = np.zeros(problem.n_cells)
    hi = np.zeros(problem.n_cells)
    np.maximum.at(hi, problem.cell, B * c / _LN2)
    for _ in range(_MU_STEPS):
        mid = 0.5 * (lo + hi)
        over = problem.cell_sum(power_at(mid[problem.cell])) > 1.0
        lo = np.where(over, mid, lo)
        hi = np.where(over, hi, mid)
    mu = np.where(need, hi, 0.0)
    return power_at(mu[problem.cell])


def _solve_linearized(
    problem: AccessProblem,
    pmin: np.ndarray,
    groups: _Groups,
    current: np.ndarray,
) -> np.ndarray:
    """Inner concave program with each backhaul group's constraint linearized at `current`"""
    zero_price = np.zeros(problem.size)
    p = _water_fill(problem, pmin, zero_price)
    if groups.size == 0:
        return p
    grad = rate_gradient(current, problem.gain, problem.bandwidth_hz)
    rates = idealized_rates(current, problem.gain, problem.bandwidth_hz)
    budget = groups.caps - groups.total(rates) + groups.total(grad * current)
    active = groups.total(grad * p) > budget
    if not active.any():
        return p

    member = groups.index >= 0
    safe_index = np.where(member, groups.index, 0)

    def solve(lam: np.ndarray) -> np.ndarray:
        price = np.where(member, lam[safe_index] * grad, 0.0)
        return _water_fill(problem, pmin, price)

    # lambda >= 1 + c p_i drives every member to its floor
    lo = np.zeros(groups.size)
    hi = np.zeros(groups.size)
    np.maximum.at(hi, groups.index[member], 1.0 + problem.gain[member] * current[member])
    hi = hi * (1.0 + 1e-9) + 1e-12
    for _ in range(_LAMBDA_STEPS):
        mid = 0.5 * (lo + hi)
        over = groups.total(grad * solve(np.where(active, mid, 0.0))) > budget
        lo = np.where(active & over, mid, lo)
        hi = np.where(active & ~over, mid, hi)
    return solve(np.where(active, hi, 0.0))


def _initial_point(problem: AccessProblem, pmin: np.ndarray, groups: _Groups) -> Tuple[np.ndarray, str]:
    counts = np.bincount(problem.cell, minlength=problem.n_cells).astype(float)
    upa = 1.0 / counts[problem.cell]
    if np.all(upa >= pmin) and _backhaul_ok(problem, upa, groups):
        return upa, "uniform"
    slack = 1.0 - problem.cell_sum(pmin)
    p = pmin + slack[problem.cell] / counts[problem.cell]
    if _backhaul_ok(problem, p, groups):
        return p, "projected"

    over = groups.total(idealized_rates(p, problem.gain, problem.bandwidth_hz)) > groups.caps
    shrink = (groups.index >= 0) & over[np.where(groups.index >= 0, groups.index, 0)]
    lo, hi = 0.0, 1.0
    for _ in range(_SCALE_STEPS):
        t = 0.5 * (lo + hi)
        trial = np.where(shrink, pmin + t * (p - pmin), p)
        if _backhaul_ok(problem, trial, groups):
            lo = t
        else:
            hi = t
    return np.where(shrink, pmin + lo * (p - pmin), p), "scaled"


def _backhaul_ok(problem: AccessProblem, p: np.ndarray, groups: _Groups) -> bool:
    if groups.size == 0:
        return True
    load = groups.total(idealized_rates(p, problem.gain, problem.bandwidth_hz))
    return bool(np.all(load <= groups.caps * (1.0 + _REL_TOL)))


def _finish(
    problem: AccessProblem,
    p: np.ndarray,
    groups: _Groups,
    method: str,
    trace: List[float],
    iterations: int,
    converged: bool,
) -> AccessAllocation:
    rates = idealized_rates(p, problem.gain, problem.bandwidth_hz)
    load = groups.total(rates)
    return AccessAllocation(
        users=problem.users.copy(),
        power=p,
        rates_bps=rates,
        method=method,
        qos_met=rates >= problem.min_rate_bps * (1.0 - _REL_TOL),
        backhaul_met=bool(np.all(load <= groups.caps * (1.0 + _REL_TOL))),
        backhaul_load_bps=load,
        backhaul_caps_bps=groups.caps.copy(),
        backhaul_group=groups.index.copy(),
        objective_trace=trace,
        iterations=iterations,
        converged=converged,
    )


def sca_allocate(
    problem: AccessProblem,
    backhaul_caps: Optional[Union[float, np.ndarray]] = None,
    mode: BackhaulMode = "global",
    max_iters: int = 50,
    tol: float = 1e-6,
) -> AccessAllocation:
    """
    Maximize the idealized access sum rate by successive convex approximation

    Each iteration linearizes the backhaul-dependent rate sum around the current
    point (an inner approximation of the concave constraint), solves the concave
    subproblem by dual bisection, and accepts the step only if the objective does
    not decrease.

    Args:
        problem: Flattened cells with idealized gains c_k
        backhaul_caps: R_b* (global) or per-NIB backhaul rates indexed by NIB id
            (per_nib); None drops the coupling constraint
        mode: 'global' or 'per_nib'
        max_iters: SCA iteration limit
        tol: Relative objective improvement that stops the iteration

    Returns:
        AccessAllocation with a non-decreasing objective trace

    Raises:
        QosInfeasibleError: If a cell's minimum-rate powers exceed its budget
        BackhaulInfeasibleError: If a group's minimum rates exceed its backhaul cap
    """
    groups = _backhaul_groups(problem, backhaul_caps, mode)
    if problem.size == 0:
        return _finish(problem, np.zeros(0), groups, "sca", [0.0], 0, True)
    if np.any(problem.gain <= 0):
        raise ValueError("effective gains must be positive")
    pmin = problem.min_power
    _check_qos(problem, pmin)
    _check_backhaul(problem, groups)

    p, start = _initial_point(problem, pmin, groups)
    objective = float(np.sum(idealized_rates(p, problem.gain, problem.bandwidth_hz)))
    trace = [objective]
    converged = False
    iterations = 0
    for iterations in range(1, max_iters + 1):
        candidate = _solve_linearized(problem, pmin, groups, p)
        value = float(np.sum(idealized_rates(candidate, problem.gain, problem.bandwidth_hz)))
        if value < objective or not _backhaul_ok(problem, candidate, groups):
            converged = True
            break
        improvement = (value - objective) / max(abs(objective), 1e-300)
        p, objective = candidate, value
        trace.append(objective)
        if improvement < tol:
            converged = True
            break

    logger.info(
        f"SCA ({start} start): {iterations} iteration(s), "
        f"sum rate {trace[0] / 1e6:.2f} -> {objective / 1e6:.2f} Mbps over {problem.n_cells} cell(s)"
    )
    return _finish(problem, p, groups, "sca", trace, iterations, converged)


def uniform_allocation(
    problem: AccessProblem,
    backhaul_caps: Optional[Union[float, np.ndarray]] = None,
    mode: BackhaulMode = "global",
) -> AccessAllocation:
    """UPA baseline: p = 1 / K_j^omega in every cell; constraint flags are reported, not enforced"""
    groups = _backhaul_groups(problem, backhaul_caps, mode)
    counts = np.bincount(problem.cell, minlength=problem.n_cells).astype(float)
    p = 1.0 / counts[problem.cell] if problem.size else np.zeros(0)
    objective = float(np.sum(idealized_rates(p, problem.gain, problem.bandwidth_hz)))
    return _finish(problem, p, groups, "upa", [objective], 0, True)


def access_rates(allocation: AccessAllocation, problem: AccessProblem) -> AccessRates:
    """
    Per-user SINR and rate, idealized and with residual intra-cell leakage

    actual: gamma p_k |h_k^H w_k|^2 / (gamma sum_{l != k} p_l |h_k^H w_l|^2 + 1)
    """
    ideal_sinr = problem.gain * allocation.power
    actual_sinr = np.zeros(problem.size)
    offset = 0
    for cell in problem.cells:
        n = cell.users.shape[0]
        p = allocation.power[offset:offset + n]
        cross = cell.precoding.cross
        signal = cell.snr * p * np.diag(cross)
        leakage = cell.snr * (cross @ p - p * np.diag(cross))
        actual_sinr[offset:offset + n] = signal / (np.clip(leakage, 0.0, None) + 1.0)
        offset += n
    return AccessRates(
        users=problem.users.copy(),
        ideal_sinr=ideal_sinr,
        actual_sinr=actual_sinr,
        ideal_bps=problem.bandwidth_hz * np.log2(1.0 + ideal_sinr),
        actual_bps=problem.bandwidth_hz * np.log2(1.0 + actual_sinr),
    )
