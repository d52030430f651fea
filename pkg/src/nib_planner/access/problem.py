"""
Access Allocation Problem
Flattened per-user view of all (NIB, RAT) cells with their idealized gains
"""

from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from nib_planner.access.precoding import PrecodingState


@dataclass(frozen=True)
class CellChannels:
    """Precoded channels of the users one NIB serves on one RAT"""

    nib: int
    rat_index: int
    users: np.ndarray           # (K_c,) user ids
    precoding: PrecodingState
    snr: np.ndarray             # (K_c,) gamma_bar_k = P / sigma_k^2
    bandwidth_hz: float

    @property
    def gains(self) -> np.ndarray:
        """Idealized c_k = gamma_bar_k |h_k^H w_k|^2"""
        return self.snr * self.precoding.effective


@dataclass(frozen=True)
class AccessProblem:
    """Per-user arrays over all cells; `cell` indexes `cell_nib`"""

    users: np.ndarray
    cell: np.ndarray
    gain: np.ndarray
    bandwidth_hz: np.ndarray
    min_rate_bps: np.ndarray
    backhaul_dependent: np.ndarray
    cell_nib: np.ndarray
    cells: List[CellChannels] = field(default_factory=list)

    @property
    def size(self) -> int:
        return int(self.users.shape[0])

    @property
    def n_cells(self) -> int:
        return int(self.cell_nib.shape[0])

    @property
    def min_power(self) -> np.ndarray:
        """p_k^min = (2^{R_min/B} - 1) / c_k"""
        return np.expm1(self.min_rate_bps / self.bandwidth_hz * np.log(2.0)) / self.gain

    def cell_sum(self, values: np.ndarray) -> np.ndarray:
        return np.bincount(self.cell, weights=values, minlength=self.n_cells)

    def cell_members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.cell == c)

    @classmethod
    def from_cells(
        cls,
        cells: Sequence[CellChannels],
        backhaul_dependent: np.ndarray,
        min_rate_bps: np.ndarray,
    ) -> "AccessProblem":
        """
        Flatten cells into one problem

        Args:
            cells: Cell channels
            backhaul_dependent: (K_total,) K_1 membership indexed by user id
            min_rate_bps: (n_rats,) R_min per RAT index
        """
        if not cells:
            empty = np.zeros(0)
            return cls(
                users=empty.astype(int), cell=empty.astype(int), gain=empty, bandwidth_hz=empty,
                min_rate_bps=empty, backhaul_dependent=empty.astype(bool), cell_nib=empty.astype(int),
            )
        users = np.concatenate([c.users for c in cells]).astype(int)
        sizes = [c.users.shape[0] for c in cells]
        min_rate = np.asarray(min_rate_bps, dtype=float)
        return cls(
            users=users,
            cell=np.repeat(np.arange(len(cells)), sizes),
            gain=np.concatenate([c.gains for c in cells]),
            bandwidth_hz=np.repeat([c.bandwidth_hz for c in cells], sizes).astype(float),
            min_rate_bps=np.repeat([min_rate[c.rat_index] for c in cells], sizes).astype(float),
            backhaul_dependent=np.asarray(backhaul_dependent, dtype=bool)[users],
            cell_nib=np.array([c.nib for c in cells], dtype=int),
            cells=list(cells),
        )


def idealized_rates(power: np.ndarray, gain: np.ndarray, bandwidth_hz: np.ndarray) -> np.ndarray:
    """B log2(1 + c p)"""
    return bandwidth_hz * np.log2(1.0 + gain * power)


def rate_gradient(power: np.ndarray, gain: np.ndarray, bandwidth_hz: np.ndarray) -> np.ndarray:
    """d/dp of B log2(1 + c p) = B c / (ln 2 (1 + c p))"""
    return bandwidth_hz * gain / (np.log(2.0) * (1.0 + gain * power))
