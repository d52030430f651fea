"""
Ground User Generation
Poisson point process of users on the HAPS coverage disk with sampled RAT demand
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from nib_planner.models.schemas import GroundUser, ScenarioConfig
from nib_planner.scenario.random_streams import substream

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UserPopulation:
    """Column-oriented user set used by the numeric stages"""

    positions: np.ndarray            # (K, 2) meters
    rat_index: np.ndarray            # (K,) index into the scenario RAT list
    backhaul_dependent: np.ndarray   # (K,) bool, membership of K_1
    noise_figure_db: np.ndarray      # (K,)
    rat_ids: List[str] = field(default_factory=list)
    degenerate: bool = False

    @property
    def size(self) -> int:
        return int(self.positions.shape[0])

    @property
    def ids(self) -> np.ndarray:
        return np.arange(self.size)

    def subset(self, index: np.ndarray) -> "UserPopulation":
        return UserPopulation(
            positions=self.positions[index],
            rat_index=self.rat_index[index],
            backhaul_dependent=self.backhaul_dependent[index],
            noise_figure_db=self.noise_figure_db[index],
            rat_ids=list(self.rat_ids),
            degenerate=self.degenerate,
        )

    def to_ground_users(
        self,
        assoc_nib: Optional[np.ndarray] = None,
        power_coeff: Optional[np.ndarray] = None,
    ) -> List[GroundUser]:
        users = []
        for k in range(self.size):
            nib = None if assoc_nib is None or assoc_nib[k] < 0 else int(assoc_nib[k])
            users.append(GroundUser(
                id=k,
                position=(float(self.positions[k, 0]), float(self.positions[k, 1])),
                rat=self.rat_ids[int(self.rat_index[k])],
                noise_figure_db=float(self.noise_figure_db[k]),
                backhaul_dependent=bool(self.backhaul_dependent[k]),
                assoc_nib=nib,
                power_coeff=0.0 if power_coeff is None else float(power_coeff[k]),
            ))
        return users

    @classmethod
    def from_ground_users(cls, users: List[GroundUser], rat_ids: List[str]) -> "UserPopulation":
        lookup = {rat: i for i, rat in enumerate(rat_ids)}
        if not users:
            return cls._empty(rat_ids)
        return cls(
            positions=np.array([u.position for u in users], dtype=float),
            rat_index=np.array([lookup[u.rat] for u in users], dtype=int),
            backhaul_dependent=np.array([u.backhaul_dependent for u in users], dtype=bool),
            noise_figure_db=np.array([u.noise_figure_db for u in users], dtype=float),
            rat_ids=list(rat_ids),
        )

    @classmethod
    def _empty(cls, rat_ids: List[str]) -> "UserPopulation":
        return cls(
            positions=np.zeros((0, 2)),
            rat_index=np.zeros(0, dtype=int),
            backhaul_dependent=np.zeros(0, dtype=bool),
            noise_figure_db=np.zeros(0),
            rat_ids=list(rat_ids),
            degenerate=True,
        )


def sample_population(config: ScenarioConfig, rng: Optional[np.random.Generator] = None) -> UserPopulation:
    """
    Draw a user population for a scenario

    Args:
        config: Scenario configuration
        rng: Generator to draw from; defaults to trial 0 of the scenario's 'users' substream

    Returns:
        UserPopulation with K ~ Poisson(density * area) users uniform on the disk
    """
    if rng is None:
        rng = substream(config.seed, "users", 0)
    radius = config.haps.coverage_radius_m
    area_km2 = np.pi * (radius / 1e3) ** 2
    mean_count = config.user_density_per_km2 * area_km2
    count = int(rng.poisson(mean_count)) if mean_count > 0 else 0

    rat_ids = config.rat_ids()
    if count == 0:
        logger.warning(f"No users drawn (mean {mean_count:.3g}); scenario is degenerate")
        return UserPopulation._empty(rat_ids)

    # Uniform on the disk: sqrt of a uniform radius fraction
    rho = radius * np.sqrt(rng.uniform(0.0, 1.0, count))
    angle = rng.uniform(0.0, 2.0 * np.pi, count)
    center = np.asarray(config.haps.center, dtype=float)
    positions = np.column_stack((rho * np.cos(angle), rho * np.sin(angle))) + center

    probs = np.array([rat.demand_prob for rat in config.rats], dtype=float)
    rat_index = rng.choice(len(rat_ids), size=count, p=probs / probs.sum())
    backhaul = rng.random(count) < config.backhaul_fraction
    noise = np.full(count, config.user_noise_figure_db, dtype=float)

    logger.debug(f"Generated {count} users (mean {mean_count:.1f}) on R={radius:.0f} m")
    return UserPopulation(
        positions=positions,
        rat_index=rat_index.astype(int),
        backhaul_dependent=backhaul,
        noise_figure_db=noise,
        rat_ids=rat_ids,
    )


def generate_users(config: ScenarioConfig) -> List[GroundUser]:
    """
    Generate the scenario's ground users

    Args:
        config: Scenario configuration (its seed fixes the draw)

    Returns:
        List of GroundUser; empty (with a logged warning) when no user is drawn
    """
    return sample_population(config).to_ground_users()
