"""
Pydantic models for scenario configuration and run outputs
Every value crossing a file boundary (scenario in, artifacts out) is one of these
"""

import math
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.constants import speed_of_light

from nib_planner.config.environments import get_environment_preset

AreaLabel = Literal["sub-urban", "urban", "dense-urban", "high-rise", "custom"]
DeploymentMethod = Literal["auto", "gdc-greedy", "gdc-exact", "gdc-lattice", "hex"]
AssociationRule = Literal["max-sinr", "nearest", "random"]
SweepAxis = Literal["coverage_radius", "tx_power", "transmit_snr", "n_antennas", "density"]


# ============================================================================
# Scenario: radio access technologies and propagation environment
# ============================================================================

class RatProfile(BaseModel):
    """One access technology a ground user may demand"""

    id: str = Field(..., description="RAT label, e.g. 'RAT-1' or '5G'")
    carrier_freq_hz: float = Field(..., gt=0, description="Carrier frequency f_c (Hz)")
    bandwidth_hz: float = Field(..., gt=0, description="Per-NIB bandwidth of this RAT (Hz)")
    demand_prob: float = Field(..., ge=0.0, le=1.0, description="Probability a user demands this RAT")
    min_rate_bps: float = Field(default=1e6, ge=0.0, description="Per-user minimum rate R_min (bps)")

    @property
    def wavelength_m(self) -> float:
        return speed_of_light / self.carrier_freq_hz


class Environment(BaseModel):
    """Air-to-ground propagation parameters of an area class"""

    label: AreaLabel = Field(default="custom", description="Area class")
    eta_los_db: float = Field(..., description="Mean excess loss of LOS links (dB)")
    eta_nlos_db: float = Field(..., description="Mean excess loss of NLOS links (dB)")
    a: float = Field(default=11.95, gt=0, description="Sigmoid parameter a")
    b: float = Field(default=0.136, gt=0, description="Sigmoid parameter b")

    @model_validator(mode="before")
    @classmethod
    def apply_preset(cls, data):
        """Expand {'preset': label} into the bundled parameters; explicit keys win"""
        if isinstance(data, dict) and "preset" in data:
            data = dict(data)
            label = data.pop("preset")
            merged = get_environment_preset(label)
            merged["label"] = label
            merged.update(data)
            return merged
        return data

    @property
    def excess_gap_db(self) -> float:
        """A = eta_LOS - eta_NLOS (non-positive for physical environments)"""
        return self.eta_los_db - self.eta_nlos_db


def default_environment() -> Environment:
    return Environment(preset="sub-urban")


def default_rats() -> List[RatProfile]:
    return [
        RatProfile(id="RAT-1", carrier_freq_hz=2.4e9, bandwidth_hz=20e6, demand_prob=0.1),
        RatProfile(id="RAT-2", carrier_freq_hz=2.1e9, bandwidth_hz=5e6, demand_prob=0.2),
        RatProfile(id="RAT-3", carrier_freq_hz=1.8e9, bandwidth_hz=20e6, demand_prob=0.3),
        RatProfile(id="RAT-4", carrier_freq_hz=3.5e9, bandwidth_hz=40e6, demand_prob=0.4),
    ]


# ============================================================================
# Scenario: aerial platforms
# ============================================================================

class PowerSchedule(BaseModel):
    """Backhaul transmit power over the day"""

    mode: Literal["constant", "time_of_day"] = Field(default="constant")
    hourly_tx_power_w: Dict[int, float] = Field(
        default_factory=dict, description="Hour of day (0-23) -> P_H in watts"
    )
    start_hour: int = Field(default=12, ge=0, le=23, description="Hour used by the first epoch")

    @field_validator("hourly_tx_power_w")
    @classmethod
    def validate_hours(cls, v):
        for hour, power in v.items():
            if not 0 <= int(hour) <= 23:
                raise ValueError(f"hour {hour} outside 0-23")
            if power <= 0:
                raise ValueError(f"power at hour {hour} must be positive")
        return v


class HapsConfig(BaseModel):
    """Stratospheric platform providing the backhaul"""

    altitude_m: float = Field(default=20e3, gt=0, description="HAPS altitude H")
    altitude_band_m: Tuple[float, float] = Field(
        default=(18e3, 24e3), description="Admissible stratospheric altitude band"
    )
    coverage_radius_m: float = Field(default=5e3, gt=0, description="Coverage radius R")
    tx_power_w: float = Field(default=100.0, gt=0, description="Backhaul transmit power P_H")
    power_schedule: PowerSchedule = Field(default_factory=PowerSchedule)
    bandwidth_hz: float = Field(default=100e6, gt=0, description="Backhaul bandwidth B_H")
    carrier_freq_hz: float = Field(default=6.4e9, gt=0, description="Backhaul carrier frequency")
    aperture_efficiency: float = Field(default=0.7, gt=0, le=1, description="Antenna aperture efficiency")
    hpbw_deg: float = Field(default=40.0, gt=0, lt=180, description="HAPS 3 dB beamwidth")
    center: Tuple[float, float] = Field(default=(0.0, 0.0), description="Ground projection w_0 (m)")

    @property
    def wavelength_m(self) -> float:
        return speed_of_light / self.carrier_freq_hz

    def tx_power_at(self, epoch: int) -> float:
        """P_H for a planning epoch, read from the schedule"""
        schedule = self.power_schedule
        if schedule.mode == "constant" or not schedule.hourly_tx_power_w:
            return self.tx_power_w
        hour = (schedule.start_hour + epoch) % 24
        table = {int(h): p for h, p in schedule.hourly_tx_power_w.items()}
        return table.get(hour, self.tx_power_w)


class NibConfig(BaseModel):
    """UAV-borne network-in-a-box hardware and link parameters"""

    tx_power_per_rat_w: Dict[str, float] = Field(
        default_factory=dict, description="P_j^Omega per RAT id; missing RATs use default_tx_power_w"
    )
    default_tx_power_w: float = Field(default=10.0, gt=0)
    n_antennas: int = Field(default=2, ge=1, description="Antennas per RAT, M")
    g_max_dbi: float = Field(default=23.0, description="Boresight beam gain G_max")
    altitude_bounds_m: Tuple[float, float] = Field(default=(100.0, 5000.0))
    hpbw_bounds_deg: Tuple[float, float] = Field(default=(5.0, 60.0))
    aperture_diameter_m: float = Field(default=0.5, gt=0, description="Antenna aperture D")
    circuit_power_access_w: float = Field(default=10.0, ge=0, description="P_c1")
    circuit_power_backhaul_w: float = Field(default=10.0, ge=0, description="P_c2")
    noise_figure_db: float = Field(default=5.0, description="NIB receiver noise figure")
    backhaul_target_rate_bps: float = Field(default=20e6, ge=0, description="R_th")

    def tx_power_w(self, rat_id: str) -> float:
        return self.tx_power_per_rat_w.get(rat_id, self.default_tx_power_w)

    @property
    def g_max_linear(self) -> float:
        return 10.0 ** (self.g_max_dbi / 10.0)


# ============================================================================
# Scenario: solver and experiment settings
# ============================================================================

class SweepSettings(BaseModel):
    """Beam-radius sweep of the planning loop"""

    # tolerance_bps = inf stops after the first feasible epoch
    model_config = ConfigDict(ser_json_inf_nan="constants")

    r_min_m: float = Field(default=2500.0, gt=0)
    r_max_m: Optional[float] = Field(default=None, gt=0, description="Defaults to the coverage radius")
    delta_r_m: float = Field(default=500.0, gt=0)
    tolerance_bps: float = Field(default=0.0, description="Stop once R_a[i] - R_a[i-1] < tolerance")


class MonteCarloSettings(BaseModel):
    trials: int = Field(default=1, ge=1)
    workers: int = Field(default=1, ge=1)


class DeploymentSettings(BaseModel):
    method: DeploymentMethod = Field(default="auto")
    exact_cap: int = Field(default=20, ge=1)
    greedy_cap: int = Field(default=5000, ge=1, description="Largest K solved with exact coverage greedy")
    prune: bool = Field(default=True, description="Drop redundant disks after covering")


class AssociationSettings(BaseModel):
    rule: AssociationRule = Field(default="max-sinr")


class BeamSettings(BaseModel):
    bcd_iterations: int = Field(default=1, ge=1)


class NomaSettings(BaseModel):
    pivot_indexing: Literal["relative", "absolute"] = Field(default="relative")
    backhaul_cap: Literal["closed_form", "achieved"] = Field(default="closed_form")


class AccessSettings(BaseModel):
    regularization: Optional[float] = Field(
        default=None, ge=0, description="RZF omega; None selects K*sigma^2/P per cell"
    )
    sca_max_iters: int = Field(default=50, ge=1)
    sca_tolerance: float = Field(default=1e-6, gt=0, description="Relative objective improvement")
    backhaul_mode: Literal["global", "per_nib"] = Field(default="global")
    enforce_backhaul: bool = Field(default=True)


class ScenarioConfig(BaseModel):
    """Full experiment description"""

    name: str = Field(default="scenario")
    haps: HapsConfig = Field(default_factory=HapsConfig)
    nib: NibConfig = Field(default_factory=NibConfig)
    environment: Environment = Field(default_factory=default_environment)
    rats: List[RatProfile] = Field(default_factory=default_rats)
    user_density_per_km2: float = Field(default=1000.0, ge=0)
    user_noise_figure_db: float = Field(default=7.0)
    seed: int = Field(default=0, ge=0)
    sweep: SweepSettings = Field(default_factory=SweepSettings)
    backhaul_fraction: float = Field(default=1.0, ge=0.0, le=1.0)
    rayleigh_scale: float = Field(default=1.0 / math.sqrt(2.0), gt=0)
    rician_k_factor: float = Field(default=10.0, ge=0)
    monte_carlo: MonteCarloSettings = Field(default_factory=MonteCarloSettings)
    deployment: DeploymentSettings = Field(default_factory=DeploymentSettings)
    association: AssociationSettings = Field(default_factory=AssociationSettings)
    beamopt: BeamSettings = Field(default_factory=BeamSettings)
    noma: NomaSettings = Field(default_factory=NomaSettings)
    access: AccessSettings = Field(default_factory=AccessSettings)

    @property
    def r_max_m(self) -> float:
        if self.sweep.r_max_m is not None:
            return self.sweep.r_max_m
        return self.haps.coverage_radius_m

    def rat_ids(self) -> List[str]:
        return [rat.id for rat in self.rats]


# ============================================================================
# Validation and infeasibility reporting
# ============================================================================

class ConfigViolation(BaseModel):
    field: str = Field(..., description="Dotted path of the offending field")
    message: str


class InfeasibilityReport(BaseModel):
    stage: str = Field(..., description="Planning stage that failed")
    reason: str
    nib_ids: List[int] = Field(default_factory=list)
    user_ids: List[int] = Field(default_factory=list)
    details: Dict[str, float] = Field(default_factory=dict)


# ============================================================================
# Network elements
# ============================================================================

class GroundUser(BaseModel):
    id: int
    position: Tuple[float, float] = Field(..., description="u_k in meters")
    rat: str = Field(..., description="Demanded RAT id")
    noise_figure_db: float
    backhaul_dependent: bool = Field(..., description="Member of K_1")
    assoc_nib: Optional[int] = None
    power_coeff: float = Field(default=0.0, ge=0.0, le=1.0)


class NibNode(BaseModel):
    id: int
    center: Tuple[float, float]
    radius_m: float = Field(..., ge=0)
    altitude_m: float = Field(..., gt=0)
    hpbw_deg: float = Field(..., gt=0)
    elevation_deg: float
    tx_power_per_rat_w: Dict[str, float] = Field(default_factory=dict)
    noma_fraction: float = Field(default=0.0, ge=0.0, le=1.0)
    backhaul_rate_bps: float = Field(default=0.0, ge=0.0)
    served: bool = True
    n_users: int = 0


# ============================================================================
# Metrics and run artifacts
# ============================================================================

class MetricBundle(BaseModel):
    sum_rate_access_bps: float = Field(..., ge=0, description="R_a (idealized, as allocated)")
    sum_rate_access_actual_bps: float = Field(..., ge=0, description="R_a with residual interference")
    sum_rate_backhaul_bps: float = Field(..., ge=0, description="R_b")
    aee_backhaul: float = Field(..., description="bits/J")
    se_avg_backhaul: float = Field(..., description="bps/Hz")
    ase_backhaul: float = Field(..., description="bps/Hz/m^2")
    ase_backhaul_per_km2: float = Field(..., description="bps/Hz/km^2")
    aee_access: float = Field(..., description="bits/J")
    se_avg_access: float = Field(..., description="bps/Hz")
    jain: float = Field(..., ge=0, le=1)
    jain_degenerate: bool = False
    seed: int = 0
    trials: int = 1
    config_hash: str = ""


class EpochSummary(BaseModel):
    iteration: int
    radius_m: float
    feasible: bool
    tx_power_haps_w: float
    n_users: int = 0
    n_nibs: int = 0
    n_nibs_hex: int = 0
    n_nibs_released: int = 0
    deployment_method: str = ""
    sum_rate_access_bps: float = 0.0
    sum_rate_backhaul_bps: float = 0.0
    epsilon_bps: Optional[float] = None
    best_sum_rate_access_bps: float = 0.0
    upa_sum_rate_access_bps: float = 0.0
    upa_jain: float = 0.0
    oma_sum_rate_backhaul_bps: float = 0.0
    oma_aee_backhaul: float = 0.0
    oma_ase_backhaul_per_km2: float = 0.0
    noma_served: int = 0
    noma_degraded: bool = False
    mean_sinr_db: Dict[str, float] = Field(default_factory=dict, description="Association rule -> mean SINR")
    sca_iterations: int = 0
    stages: List[str] = Field(default_factory=list, description="Stages completed in this epoch")
    metrics: Optional[MetricBundle] = None
    infeasibility: Optional[InfeasibilityReport] = None


class RunManifest(BaseModel):
    config_hash: str
    seed: int
    version: str
    command: str = "run"
    files: List[str] = Field(default_factory=list)


class RunArtifacts(BaseModel):
    manifest: RunManifest
    config: ScenarioConfig
    epochs: List[EpochSummary] = Field(default_factory=list)
    best_epoch: Optional[int] = None
    best_sum_rate_access_bps: float = 0.0
    nibs: List[NibNode] = Field(default_factory=list, description="Optimal NIB parameters of the best epoch")
    users: List[GroundUser] = Field(default_factory=list, description="Association and power coefficients of the best epoch")
