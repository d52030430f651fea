"""
Planning Orchestrator
Runs the sequential beam-radius loop over deployment, association,
beam optimization, backhaul NOMA and access SCA, keeping the best epoch
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional

import numpy as np

from nib_planner import __version__
from nib_planner.access import (
    AccessAllocation,
    AccessProblem,
    AccessRates,
    CellChannels,
    access_rates,
    default_regularization,
    rzf_precoder,
    sca_allocate,
    uniform_allocation,
)
from nib_planner.association import (
    AssociationMap,
    CandidateLinks,
    associate,
    build_candidates,
    score_candidates,
)
from nib_planner.backhaul import NomaAllocation, noma_closed_form, oma_baseline
from nib_planner.beamopt import BeamGeometry, finalize_geometry, optimal_elevation, optimize_beam
from nib_planner.callbacks.monitoring import error_callback, stage_callback
from nib_planner.channel import (
    BackhaulChannel,
    LinkBudget,
    access_link_budget,
    draw_access_gains,
    draw_backhaul,
    noise_power_w,
)
from nib_planner.config.stage_names import stages_through
from nib_planner.deployment import DeploymentPlan, deploy, hex_baseline
from nib_planner.errors import CoverageError, InfeasibleError
from nib_planner.guardrails import (
    GuardrailReport,
    check_access,
    check_association,
    check_cover,
    check_geometry,
    check_noma,
)
from nib_planner.metrics import M2_PER_KM2, aee_backhaul, ase_backhaul, build_metric_bundle, jain_index
from nib_planner.models.schemas import (
    EpochSummary,
    GroundUser,
    InfeasibilityReport,
    MetricBundle,
    NibNode,
    RunArtifacts,
    RunManifest,
    ScenarioConfig,
)
from nib_planner.scenario import UserPopulation, config_hash, sample_population, substream

logger = logging.getLogger(__name__)

ASSOCIATION_RULES = ("max-sinr", "nearest", "random")


@dataclass
class EpochState:
    """Everything one planning-loop iteration produced; stages that did not run stay empty"""

    iteration: int
    radius_m: float
    trial: int = 0
    tx_power_haps_w: float = 0.0
    population: Optional[UserPopulation] = None
    plan: Optional[DeploymentPlan] = None
    hex_plan: Optional[DeploymentPlan] = None
    elevation_deg: Optional[float] = None
    links: Optional[CandidateLinks] = None
    association: Optional[AssociationMap] = None
    rule_maps: Dict[str, AssociationMap] = field(default_factory=dict)
    deployed_ids: Optional[np.ndarray] = None     # plan disk of each kept NIB
    provisional: List[BeamGeometry] = field(default_factory=list)
    geometries: List[BeamGeometry] = field(default_factory=list)
    access_budget: Optional[LinkBudget] = None    # user -> serving NIB
    access_gains: Optional[np.ndarray] = None     # (K, M)
    backhaul: Optional[BackhaulChannel] = None
    noma: Optional[NomaAllocation] = None
    oma_rates_bps: Optional[np.ndarray] = None
    problem: Optional[AccessProblem] = None
    allocation: Optional[AccessAllocation] = None
    upa: Optional[AccessAllocation] = None
    rates: Optional[AccessRates] = None
    metrics: Optional[MetricBundle] = None
    guardrails: Optional[GuardrailReport] = None
    completed: List[str] = field(default_factory=list)
    infeasibility: Optional[InfeasibilityReport] = None

    @property
    def feasible(self) -> bool:
        return self.infeasibility is None

    @property
    def beams(self) -> List[BeamGeometry]:
        """Final geometries when beam optimization ran, else the provisional ones"""
        return self.geometries or self.provisional

    @property
    def n_nibs(self) -> int:
        if self.association is not None:
            return self.association.n_nibs
        return self.plan.n_nibs if self.plan is not None else 0

    def beam_array(self, attribute: str) -> np.ndarray:
        return np.array([getattr(g, attribute) for g in self.beams], dtype=float)

    @property
    def centers(self) -> np.ndarray:
        return np.array([g.center for g in self.beams], dtype=float).reshape(-1, 2)

    def user_power(self) -> np.ndarray:
        """Power coefficient per user id, 0 where no allocation exists"""
        power = np.zeros(self.population.size if self.population is not None else 0)
        if self.allocation is not None:
            power[self.allocation.users] = self.allocation.power
        return power


@dataclass
class RunResult:
    """Outcome of a planning run: serializable artifacts plus the best epoch's full state"""

    artifacts: RunArtifacts
    best_state: Optional[EpochState]


def epoch_radii(config: ScenarioConfig) -> List[float]:
    """r[i] = r_min + i * delta_r for every value not above r_max"""
    r_min, r_max, step = config.sweep.r_min_m, config.r_max_m, config.sweep.delta_r_m
    count = int(math.floor((r_max - r_min) / step + 1e-9)) + 1
    return [r_min + i * step for i in range(max(count, 1))]


class PlanningOrchestrator:
    """Runs the planning stages of one Monte Carlo trial"""

    def __init__(self, config: ScenarioConfig, trial: int = 0):
        self.config = config
        self.trial = trial
        self.config_hash = config_hash(config)
        self._population: Optional[UserPopulation] = None
        self._elevation: Optional[float] = None
        self._rat_freq = np.array([rat.carrier_freq_hz for rat in config.rats])
        self._rat_bandwidth = np.array([rat.bandwidth_hz for rat in config.rats])
        self._rat_power = np.array([config.nib.tx_power_w(rat.id) for rat in config.rats])
        logger.debug(f"PlanningOrchestrator initialized (trial {trial}, config {self.config_hash[:12]})")

    # ------------------------------------------------------------------
    # Shared inputs
    # ------------------------------------------------------------------

    @property
    def population(self) -> UserPopulation:
        """Users of this trial, drawn once and reused by every epoch"""
        if self._population is None:
            rng = substream(self.config.seed, "users", self.trial)
            self._population = sample_population(self.config, rng)
            stage_callback('users', users=self._population.size)
        return self._population

    @property
    def elevation_deg(self) -> float:
        """phi*, which depends on the environment only"""
        if self._elevation is None:
            self._elevation = optimal_elevation(
                self.config.sweep.r_min_m, self.config.environment, float(self._rat_freq[0]),
            )
        return self._elevation

    def _rng(self, name: str, iteration: int, *extra: int) -> np.random.Generator:
        return substream(self.config.seed, name, self.trial, iteration, *extra)

    # ------------------------------------------------------------------
    # Epoch
    # ------------------------------------------------------------------

    def run_epoch(self, iteration: int, radius_m: float, stop_after: Optional[str] = None) -> EpochState:
        """
        Run the stages of one iteration

        Infeasibility in any stage is recorded on the returned state instead of
        raised, so callers can continue with the next radius.

        Args:
            iteration: Planning-loop index i (selects the P_H schedule entry and RNG substreams)
            radius_m: Beam radius r[i]
            stop_after: Last stage to run (see STAGE_DISPLAY_NAMES); None runs all

        Returns:
            EpochState
        """
        state = EpochState(
            iteration=iteration,
            radius_m=radius_m,
            trial=self.trial,
            tx_power_haps_w=self.config.haps.tx_power_at(iteration),
            population=self.population,
        )
        state.completed.append('users')
        for stage in stages_through(stop_after)[1:]:
            try:
                getattr(self, f"_stage_{stage}")(state)
            except InfeasibleError as e:
                error_callback(stage, e, iteration)
                state.infeasibility = e.report
                return state
            except CoverageError as e:
                error_callback(stage, e, iteration)
                state.infeasibility = InfeasibilityReport(
                    stage=stage, reason=str(e), user_ids=[int(u) for u in e.user_ids],
                )
                return state
            state.completed.append(stage)
        return state

    def _stage_deployment(self, state: EpochState) -> None:
        cfg = self.config
        state.plan = deploy(
            state.population, state.radius_m, cfg.deployment,
            coverage_radius=cfg.haps.coverage_radius_m, center=cfg.haps.center,
        )
        state.hex_plan = hex_baseline(cfg.haps.coverage_radius_m, state.radius_m, cfg.haps.center)
        stage_callback(
            'deployment', state.iteration,
            method=state.plan.method, n_nibs=state.plan.n_nibs, n_nibs_hex=state.hex_plan.n_nibs,
        )

    def _stage_association(self, state: EpochState) -> None:
        cfg = self.config
        population = state.population
        if population.size == 0:
            raise InfeasibleError(InfeasibilityReport(stage="association", reason="no users to associate"))
        plan = state.plan
        state.elevation_deg = self.elevation_deg
        base = finalize_geometry((plan.centers[0], plan.radius), state.elevation_deg, cfg.nib, cfg.rats)
        provisional = [replace(base, center=np.asarray(c, dtype=float)) for c in plan.centers]

        links = build_candidates(population.positions, plan.centers, base.radius_m)
        state.links = score_candidates(
            links, population, plan.centers, base.altitude_m, base.hpbw_deg, cfg.rats,
            cfg.environment, cfg.nib, self._rng("fading", state.iteration, 0), cfg.rayleigh_scale,
        )
        baseline_rng = self._rng("baselines", state.iteration)
        for rule in ASSOCIATION_RULES:
            state.rule_maps[rule] = associate(population, state.links, plan.n_nibs, rule, rng=baseline_rng)

        state.association, state.deployed_ids = state.rule_maps[cfg.association.rule].release_empty()
        state.provisional = [provisional[j] for j in state.deployed_ids]
        stage_callback(
            'association', state.iteration,
            rule=cfg.association.rule,
            n_nibs=state.association.n_nibs,
            released=plan.n_nibs - state.association.n_nibs,
            mean_sinr_db=state.association.mean_sinr_db(),
        )

    def _stage_beamopt(self, state: EpochState) -> None:
        cfg = self.config
        population = state.population
        freq = self._rat_freq[population.rat_index]
        geometries = []
        for j, members in enumerate(state.association.members()):
            geometries.append(optimize_beam(
                population.positions[members], freq[members], state.provisional[j], state.elevation_deg,
                cfg.nib, cfg.rats, cfg.environment, iterations=cfg.beamopt.bcd_iterations, nib_id=j,
            ))
        state.geometries = geometries
        stage_callback(
            'beamopt', state.iteration,
            mean_radius_m=float(np.mean(state.beam_array("radius_m"))),
            mean_altitude_m=float(np.mean(state.beam_array("altitude_m"))),
        )

    def _stage_haps_power(self, state: EpochState) -> None:
        # solar-power estimation is out of scope; P_H comes from the schedule
        state.tx_power_haps_w = self.config.haps.tx_power_at(state.iteration)
        stage_callback('haps_power', state.iteration, tx_power_w=state.tx_power_haps_w)

    def _stage_channels(self, state: EpochState) -> None:
        cfg = self.config
        population = state.population
        nib = state.association.nib_of_user
        centers = state.centers
        altitudes = state.beam_array("altitude_m")
        state.access_budget = access_link_budget(
            population.positions, self._rat_freq[population.rat_index], centers[nib],
            altitudes[nib], state.beam_array("hpbw_deg")[nib], cfg.environment, cfg.nib.g_max_linear,
        )
        state.access_gains = draw_access_gains(
            state.access_budget.mean_gain, cfg.nib.n_antennas,
            self._rng("fading", state.iteration, 1), cfg.rayleigh_scale,
        )
        state.backhaul = draw_backhaul(
            centers, altitudes, cfg.haps, cfg.nib.noise_figure_db, cfg.rician_k_factor,
            self._rng("backhaul", state.iteration), tx_power_w=state.tx_power_haps_w,
        )
        stage_callback('channels', state.iteration, links=population.size, nibs=centers.shape[0])

    def _stage_backhaul(self, state: EpochState) -> None:
        cfg = self.config
        aleph = np.atleast_1d(state.backhaul.aleph)
        state.noma = noma_closed_form(
            aleph, cfg.nib.backhaul_target_rate_bps, cfg.haps.bandwidth_hz, cfg.noma.pivot_indexing,
        )
        state.oma_rates_bps = oma_baseline(aleph, cfg.haps.bandwidth_hz)
        stage_callback(
            'backhaul', state.iteration,
            served=state.noma.n_served,
            sum_rate_mbps=state.noma.cap(cfg.noma.backhaul_cap) / 1e6,
            degraded=state.noma.degraded,
        )

    def build_cells(self, state: EpochState) -> List[CellChannels]:
        """RZF-precoded channels of every non-empty (NIB, RAT) cell"""
        cfg = self.config
        population = state.population
        nib = state.association.nib_of_user
        noise = noise_power_w(self._rat_bandwidth[population.rat_index], population.noise_figure_db)
        order = np.lexsort((population.rat_index, nib))
        keys = nib[order] * len(cfg.rats) + population.rat_index[order]
        cells = []
        for members in np.split(order, np.flatnonzero(np.diff(keys)) + 1):
            if members.size == 0:
                continue
            j, w = int(nib[members[0]]), int(population.rat_index[members[0]])
            power = float(self._rat_power[w])
            omega = cfg.access.regularization
            if omega is None:
                omega = default_regularization(members.size, float(np.mean(noise[members])), power)
            cells.append(CellChannels(
                nib=j,
                rat_index=w,
                users=members,
                precoding=rzf_precoder(state.access_gains[members].T, omega),
                snr=power / noise[members],
                bandwidth_hz=float(self._rat_bandwidth[w]),
            ))
        return cells

    def backhaul_caps(self, noma: NomaAllocation):
        """R_b* (global) or per-NIB rates (per_nib) under the configured cap source"""
        cfg = self.config
        if not cfg.access.enforce_backhaul:
            return None
        if cfg.access.backhaul_mode == "global":
            return noma.cap(cfg.noma.backhaul_cap)
        return noma.nib_rates(cfg.noma.backhaul_cap)

    def _stage_access(self, state: EpochState) -> None:
        cfg = self.config
        min_rates = np.array([rat.min_rate_bps for rat in cfg.rats])
        state.problem = AccessProblem.from_cells(
            self.build_cells(state), state.population.backhaul_dependent, min_rates,
        )
        caps = self.backhaul_caps(state.noma)
        state.allocation = sca_allocate(
            state.problem, caps, cfg.access.backhaul_mode, cfg.access.sca_max_iters, cfg.access.sca_tolerance,
        )
        state.upa = uniform_allocation(state.problem, caps, cfg.access.backhaul_mode)
        state.rates = access_rates(state.allocation, state.problem)
        stage_callback(
            'access', state.iteration,
            cells=state.problem.n_cells,
            iterations=state.allocation.iterations,
            sum_rate_mbps=state.allocation.sum_rate_bps / 1e6,
            upa_sum_rate_mbps=state.upa.sum_rate_bps / 1e6,
        )

    def _stage_metrics(self, state: EpochState) -> None:
        cfg = self.config
        problem, allocation, noma = state.problem, state.allocation, state.noma
        rat_of_user = state.population.rat_index[problem.users]
        state.metrics = build_metric_bundle(
            access_rates_bps=allocation.rates_bps,
            access_actual_bps=state.rates.actual_bps,
            power_coeffs=allocation.power,
            access_tx_powers_w=self._rat_power[rat_of_user],
            access_bandwidths_hz=problem.bandwidth_hz,
            backhaul_rates_bps=noma.nib_rates(cfg.noma.backhaul_cap),
            backhaul_fractions=noma.by_nib(noma.fractions),
            haps_tx_power_w=state.tx_power_haps_w,
            haps_bandwidth_hz=cfg.haps.bandwidth_hz,
            coverage_radius_m=cfg.haps.coverage_radius_m,
            circuit_power_access_w=cfg.nib.circuit_power_access_w,
            circuit_power_backhaul_w=cfg.nib.circuit_power_backhaul_w,
            seed=cfg.seed,
            trials=1,
            config_hash=self.config_hash,
        )
        stage_callback(
            'metrics', state.iteration,
            sum_rate_access_mbps=state.metrics.sum_rate_access_bps / 1e6,
            jain=state.metrics.jain,
        )

    def verify(self, state: EpochState) -> GuardrailReport:
        """Re-check every constraint of the stages that ran, independently of the solvers"""
        cfg = self.config
        report = GuardrailReport()
        positions = state.population.positions
        if state.plan is not None and state.plan.method != "hex":
            report.extend('cover', check_cover(positions, state.plan.centers, state.plan.radius))
        if state.association is not None and state.beams:
            report.extend('association', check_association(
                positions, state.association.nib_of_user, state.centers, state.beam_array("radius_m"),
            ))
            report.extend('geometry', check_geometry(
                state.beam_array("altitude_m"), state.beam_array("hpbw_deg"),
                cfg.nib.altitude_bounds_m, cfg.nib.hpbw_bounds_deg,
            ))
        if state.noma is not None:
            noma = state.noma
            report.extend('noma', check_noma(
                noma.fractions, noma.aleph, noma.served, noma.target_rate_bps, noma.bandwidth_hz, noma.fractions_hat,
            ))
        if state.allocation is not None:
            allocation, problem = state.allocation, state.problem
            report.extend('access', check_access(
                problem.cell, allocation.power, problem.gain, problem.bandwidth_hz, problem.min_rate_bps,
                group=allocation.backhaul_group, caps=allocation.backhaul_caps_bps,
            ))
        return report

    def _stage_guardrails(self, state: EpochState) -> None:
        state.guardrails = self.verify(state)
        if not state.guardrails.passed:
            violations = state.guardrails.violations
            raise InfeasibleError(InfeasibilityReport(
                stage="guardrails",
                reason=f"{len(violations)} constraint violation(s), first: {violations[0]}",
                details={"violations": float(len(violations))},
            ))
        stage_callback('guardrails', state.iteration, checks=len(state.guardrails.checks_run))

    # ------------------------------------------------------------------
    # Outputs
    # ------------------------------------------------------------------

    def summarize(
        self,
        state: EpochState,
        epsilon_bps: Optional[float] = None,
        best_sum_rate_bps: float = 0.0,
    ) -> EpochSummary:
        """Condense an epoch into its serializable summary"""
        cfg = self.config
        summary = {
            "iteration": state.iteration,
            "radius_m": state.radius_m,
            "feasible": state.feasible,
            "tx_power_haps_w": state.tx_power_haps_w,
            "n_users": state.population.size if state.population is not None else 0,
            "n_nibs": state.n_nibs,
            "epsilon_bps": epsilon_bps,
            "best_sum_rate_access_bps": best_sum_rate_bps,
            "stages": list(state.completed),
            "metrics": state.metrics if state.feasible else None,
            "infeasibility": state.infeasibility,
        }
        sinr = {rule: m.mean_sinr_db() for rule, m in state.rule_maps.items()}
        summary["mean_sinr_db"] = {rule: value for rule, value in sinr.items() if math.isfinite(value)}
        if state.plan is not None:
            summary["deployment_method"] = state.plan.method
            summary["n_nibs_hex"] = state.hex_plan.n_nibs
        if state.association is not None:
            summary["n_nibs_released"] = state.plan.n_nibs - state.association.n_nibs
        if state.noma is not None:
            J = state.noma.n_nibs
            summary["noma_served"] = state.noma.n_served
            summary["noma_degraded"] = state.noma.degraded
            summary["oma_sum_rate_backhaul_bps"] = float(np.sum(state.oma_rates_bps))
            summary["oma_aee_backhaul"] = aee_backhaul(
                state.oma_rates_bps, np.full(J, 1.0 / J), state.tx_power_haps_w, cfg.nib.circuit_power_backhaul_w,
            )
            summary["oma_ase_backhaul_per_km2"] = M2_PER_KM2 * ase_backhaul(
                state.oma_rates_bps, cfg.haps.bandwidth_hz, cfg.haps.coverage_radius_m,
            )
        if state.allocation is not None:
            summary["sca_iterations"] = state.allocation.iterations
            summary["upa_sum_rate_access_bps"] = state.upa.sum_rate_bps
            if state.upa.rates_bps.size:
                summary["upa_jain"] = jain_index(state.upa.rates_bps)[0]
        if state.metrics is not None and state.feasible:
            summary["sum_rate_access_bps"] = state.metrics.sum_rate_access_bps
            summary["sum_rate_backhaul_bps"] = state.metrics.sum_rate_backhaul_bps
        return EpochSummary(**summary)

    def nib_nodes(self, state: EpochState) -> List[NibNode]:
        """Per-NIB parameters (geometry, NOMA fraction, backhaul rate) of an epoch"""
        cfg = self.config
        if not state.beams:
            return []
        counts = np.bincount(state.association.nib_of_user, minlength=len(state.beams))
        fractions = rates = served = None
        if state.noma is not None:
            fractions = state.noma.by_nib(state.noma.fractions)
            rates = state.noma.nib_rates(cfg.noma.backhaul_cap)
            served = state.noma.by_nib(state.noma.served)
        nodes = []
        for j, geometry in enumerate(state.beams):
            nodes.append(NibNode(
                id=j,
                center=(float(geometry.center[0]), float(geometry.center[1])),
                radius_m=geometry.radius_m,
                altitude_m=geometry.altitude_m,
                hpbw_deg=geometry.hpbw_deg,
                elevation_deg=geometry.elevation_deg,
                tx_power_per_rat_w={rat.id: cfg.nib.tx_power_w(rat.id) for rat in cfg.rats},
                noma_fraction=float(min(fractions[j], 1.0)) if fractions is not None else 0.0,
                backhaul_rate_bps=float(rates[j]) if rates is not None else 0.0,
                served=bool(served[j]) if served is not None else True,
                n_users=int(counts[j]),
            ))
        return nodes

    def ground_users(self, state: EpochState) -> List[GroundUser]:
        """Users with their serving NIB and power coefficient"""
        assoc = state.association.nib_of_user if state.association is not None else None
        return state.population.to_ground_users(assoc_nib=assoc, power_coeff=state.user_power())


def run_planning(config: ScenarioConfig, trial: int = 0) -> RunResult:
    """
    Sequential beam-radius optimization

    Each epoch widens the beam radius by delta_r and runs the full stage chain.
    Infeasible epochs are recorded and skipped; the loop stops once the access
    sum-rate gain epsilon = R_a[i] - R_a[i-1] of a feasible epoch falls below
    the tolerance (R_a[-1] = 0), or the radius leaves [r_min, r_max].

    Args:
        config: Valid scenario
        trial: Monte Carlo trial index selecting the random substreams

    Returns:
        RunResult with the per-epoch summaries and the best epoch's parameters

    Raises:
        InfeasibleError: If no epoch is feasible
    """
    orchestrator = PlanningOrchestrator(config, trial=trial)
    tolerance = config.sweep.tolerance_bps
    radii = epoch_radii(config)
    logger.info(
        f"Planning '{config.name}': {len(radii)} radius step(s) "
        f"from {radii[0]:.0f} m, K={orchestrator.population.size}"
    )

    summaries: List[EpochSummary] = []
    best_state: Optional[EpochState] = None
    best_rate = 0.0
    previous = 0.0
    for i, radius in enumerate(radii):
        state = orchestrator.run_epoch(i, radius)
        if not state.feasible:
            summaries.append(orchestrator.summarize(state, best_sum_rate_bps=best_rate))
            continue

        rate = state.metrics.sum_rate_access_bps
        epsilon = rate - previous
        previous = rate
        if best_state is None or rate > best_rate:
            best_state, best_rate = state, rate
        summaries.append(orchestrator.summarize(state, epsilon_bps=epsilon, best_sum_rate_bps=best_rate))
        if epsilon < tolerance:
            logger.info(f"Stopping after epoch {i}: epsilon {epsilon / 1e6:.3f} Mbps below tolerance")
            break

    if best_state is None:
        raise InfeasibleError(InfeasibilityReport(
            stage="run",
            reason=f"all {len(summaries)} epoch(s) infeasible",
            details={"epochs": float(len(summaries))},
        ))

    artifacts = RunArtifacts(
        manifest=RunManifest(
            config_hash=orchestrator.config_hash, seed=config.seed, version=__version__, command="run",
        ),
        config=config,
        epochs=summaries,
        best_epoch=best_state.iteration,
        best_sum_rate_access_bps=best_rate,
        nibs=orchestrator.nib_nodes(best_state),
        users=orchestrator.ground_users(best_state),
    )
    logger.info(
        f"Planning done: best epoch {best_state.iteration} (r={best_state.radius_m:.0f} m), "
        f"R_a*={best_rate / 1e6:.2f} Mbps with {best_state.n_nibs} NIB(s)"
    )
    return RunResult(artifacts=artifacts, best_state=best_state)
