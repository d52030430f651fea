"""
User Association
Assigns every user to exactly one covering NIB: max-SINR rule and the
distance-based and random baselines
"""

import logging
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import sparse

from nib_planner.association.sinr import CandidateLinks
from nib_planner.errors import CoverageError
from nib_planner.scenario.users import UserPopulation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AssociationMap:
    """alpha_k^j in column form: one serving NIB per user"""

    nib_of_user: np.ndarray           # (K,)
    n_nibs: int
    rat_index: np.ndarray             # (K,)
    n_rats: int
    rule: str
    sinr: Optional[np.ndarray] = None  # (K,) linear SINR of the chosen link
    distance_m: Optional[np.ndarray] = None

    @property
    def n_users(self) -> int:
        return int(self.nib_of_user.shape[0])

    def members(self) -> List[np.ndarray]:
        order = np.argsort(self.nib_of_user, kind="stable")
        bounds = np.searchsorted(self.nib_of_user[order], np.arange(self.n_nibs + 1))
        return [order[bounds[j]:bounds[j + 1]] for j in range(self.n_nibs)]

    def counts(self) -> np.ndarray:
        """(J, n_rats) array of K_j^omega"""
        flat = self.nib_of_user * self.n_rats + self.rat_index
        return np.bincount(flat, minlength=self.n_nibs * self.n_rats).reshape(self.n_nibs, self.n_rats)

    def alpha(self) -> sparse.csr_matrix:
        data = np.ones(self.n_users, dtype=bool)
        return sparse.csr_matrix((data, (np.arange(self.n_users), self.nib_of_user)), shape=(self.n_users, self.n_nibs))

    def mean_sinr_db(self) -> float:
        if self.sinr is None or self.sinr.size == 0:
            return float("nan")
        return float(np.mean(10.0 * np.log10(np.maximum(self.sinr, 1e-300))))

    def release_empty(self) -> Tuple["AssociationMap", np.ndarray]:
        """
        Drop NIBs that serve nobody and renumber the rest

        Returns:
            (compacted map, kept original NIB ids in new-id order)
        """
        sizes = np.bincount(self.nib_of_user, minlength=self.n_nibs)
        kept = np.flatnonzero(sizes > 0)
        if kept.size == self.n_nibs:
            return self, kept
        remap = np.full(self.n_nibs, -1, dtype=int)
        remap[kept] = np.arange(kept.size)
        logger.info(f"Released {self.n_nibs - kept.size} NIB(s) left without users")
        return replace(self, nib_of_user=remap[self.nib_of_user], n_nibs=int(kept.size)), kept

    def summary(self) -> Dict[str, float]:
        sizes = np.bincount(self.nib_of_user, minlength=self.n_nibs)
        return {
            "users": float(self.n_users),
            "nibs_serving": float(np.count_nonzero(sizes)),
            "max_load": float(sizes.max()) if sizes.size else 0.0,
            "mean_sinr_db": self.mean_sinr_db(),
        }


def _require_coverage(links: CandidateLinks, n_users: int) -> None:
    missing = links.uncovered(n_users)
    if missing.size:
        logger.error(f"{missing.size} user(s) lie outside every NIB disk")
        raise CoverageError(missing.tolist())


def _first_per_user(links: CandidateLinks, order: np.ndarray, n_users: int) -> np.ndarray:
    users_sorted = links.user[order]
    _, first = np.unique(users_sorted, return_index=True)
    chosen = np.full(n_users, -1, dtype=int)
    chosen[users_sorted[first]] = order[first]
    return chosen


def _build_map(links: CandidateLinks, chosen: np.ndarray, population: UserPopulation, n_nibs: int, rule: str) -> AssociationMap:
    return AssociationMap(
        nib_of_user=links.nib[chosen],
        n_nibs=n_nibs,
        rat_index=population.rat_index.copy(),
        n_rats=len(population.rat_ids),
        rule=rule,
        sinr=None if links.sinr is None else links.sinr[chosen],
        distance_m=links.distance_m[chosen],
    )


def associate_max_sinr(population: UserPopulation, links: CandidateLinks, n_nibs: int) -> AssociationMap:
    """
    Max-SINR association over covering NIBs; ties go to the lowest NIB id

    Args:
        population: Users
        links: Scored candidate links (see score_candidates)
        n_nibs: J

    Returns:
        AssociationMap

    Raises:
        CoverageError: If a user has no covering NIB
    """
    if links.sinr is None:
        raise ValueError("candidate links carry no SINR; score them first")
    _require_coverage(links, population.size)
    order = np.lexsort((links.nib, -links.sinr, links.user))
    chosen = _first_per_user(links, order, population.size)
    return _build_map(links, chosen, population, n_nibs, "max-sinr")


def associate_nearest(population: UserPopulation, links: CandidateLinks, n_nibs: int) -> AssociationMap:
    """Distance-based baseline: closest covering beam centre, lowest id on ties"""
    _require_coverage(links, population.size)
    order = np.lexsort((links.nib, links.distance_m, links.user))
    chosen = _first_per_user(links, order, population.size)
    return _build_map(links, chosen, population, n_nibs, "nearest")


def associate_random(
    population: UserPopulation, links: CandidateLinks, n_nibs: int, rng: np.random.Generator,
) -> AssociationMap:
    """Random baseline: uniform choice among covering NIBs"""
    _require_coverage(links, population.size)
    starts = np.searchsorted(links.user, np.arange(population.size))
    counts = np.bincount(links.user, minlength=population.size)
    offset = np.minimum((rng.random(population.size) * counts).astype(int), counts - 1)
    return _build_map(links, starts + offset, population, n_nibs, "random")


def associate(
    population: UserPopulation,
    links: CandidateLinks,
    n_nibs: int,
    rule: str = "max-sinr",
    rng: Optional[np.random.Generator] = None,
) -> AssociationMap:
    """Dispatch on the configured association rule"""
    if rule == "max-sinr":
        result = associate_max_sinr(population, links, n_nibs)
    elif rule == "nearest":
        result = associate_nearest(population, links, n_nibs)
    elif rule == "random":
        if rng is None:
            raise ValueError("random association needs a generator")
        result = associate_random(population, links, n_nibs, rng)
    else:
        raise ValueError(f"unknown association rule '{rule}'")
    logger.info(f"Association ({rule}): {result.summary()}")
    return result
