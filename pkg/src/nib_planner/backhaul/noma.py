"""
Backhaul NOMA
Channel-ordered power fractions for the HAPS-to-NIB superposition link,
SIC SINRs and the OFDMA baseline
"""

import logging
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

logger = logging.getLogger(__name__)

PivotIndexing = Literal["relative", "absolute"]
CapMode = Literal["closed_form", "achieved"]


@dataclass(frozen=True)
class NomaAllocation:
    """
    Backhaul power split; array fields are in SIC order (weakest NIB first)

    `fractions_hat` are the threshold-meeting fractions before the leftover,
    `fractions` the transmitted split with the leftover on the strongest NIB
    and the weaker served fractions re-solved so they still reach R_th.
    """

    order: np.ndarray                 # NIB ids, weakest first
    aleph: np.ndarray
    fractions_hat: np.ndarray
    fractions: np.ndarray
    served: np.ndarray
    pivot: Optional[int]              # first served position, None when degraded
    delta_f: float
    sinr: np.ndarray
    rates_bps: np.ndarray             # SIC rates of `fractions`
    closed_form_rates_bps: np.ndarray  # R_th per served NIB, plus the leftover bonus on the strongest
    sum_rate_bps: float               # R_b*
    achieved_sum_rate_bps: float
    target_rate_bps: float
    bandwidth_hz: float
    degraded: bool = False

    @property
    def n_nibs(self) -> int:
        return int(self.order.shape[0])

    @property
    def n_served(self) -> int:
        return int(np.count_nonzero(self.served))

    def by_nib(self, values: np.ndarray) -> np.ndarray:
        """Reorder an SIC-ordered array to NIB id order"""
        out = np.empty_like(values)
        out[self.order] = values
        return out

    def nib_rates(self, mode: CapMode = "closed_form") -> np.ndarray:
        return self.by_nib(self.closed_form_rates_bps if mode == "closed_form" else self.rates_bps)

    def cap(self, mode: CapMode = "closed_form") -> float:
        return self.sum_rate_bps if mode == "closed_form" else self.achieved_sum_rate_bps


def order_nibs(aleph) -> np.ndarray:
    """
    SIC order: ascending channel strength, i.e. descending aleph; ties by NIB id

    Returns:
        Permutation of NIB ids, weakest first
    """
    return np.argsort(-np.asarray(aleph, dtype=float), kind="stable")


def backhaul_sinrs(fractions, aleph) -> np.ndarray:
    """Gamma_j = f_j / (sum_{i>j} f_i + aleph_j) for every ordered NIB; the strongest sees no interference"""
    f = np.asarray(fractions, dtype=float)
    aleph = np.asarray(aleph, dtype=float)
    stronger = np.concatenate((np.cumsum(f[::-1])[::-1][1:], [0.0]))
    return f / (stronger + aleph)


def backhaul_sinr(fractions, aleph, j: int) -> float:
    """SINR of the j-th ordered NIB (0-based)"""
    return float(backhaul_sinrs(fractions, aleph)[j])


def _budget_from(aleph_sorted: np.ndarray, step: float, q: float, pivot: int, indexing: PivotIndexing) -> float:
    """(2^q - 1) sum_{i>=pivot} aleph_i 2^{(i - base) q}"""
    i = np.arange(pivot, aleph_sorted.shape[0])
    base = pivot if indexing == "relative" else 0
    return float(step * np.sum(aleph_sorted[pivot:] * np.exp2((i - base) * q)))


def noma_closed_form(
    aleph,
    target_rate_bps: float,
    bandwidth_hz: float,
    pivot_indexing: PivotIndexing = "relative",
    ordered: bool = False,
) -> NomaAllocation:
    """
    Closed-form NOMA split serving as many NIBs as possible at R_th

    The pivot is the weakest NIB from which every stronger NIB can be served
    within the unit budget. Threshold fractions follow
    f_j = (2^{R_th/B_H} - 1)(sum_{k>j} f_k + aleph_j) from the strongest down,
    and the remaining fraction goes to the strongest NIB.

    Args:
        aleph: Normalized noise aleph_j per NIB (NIB id order unless `ordered`)
        target_rate_bps: R_th >= 0
        bandwidth_hz: B_H > 0
        pivot_indexing: 'relative' counts the pivot exponent from the pivot itself
            (so the budget equals the sum of fractions); 'absolute' counts from the weakest NIB
        ordered: aleph is already descending

    Returns:
        NomaAllocation
    """
    aleph = np.asarray(aleph, dtype=float).ravel()
    if aleph.size == 0:
        raise ValueError("NOMA allocation needs at least one NIB")
    if bandwidth_hz <= 0:
        raise ValueError("backhaul bandwidth must be positive")
    if target_rate_bps < 0:
        raise ValueError("target rate must be non-negative")

    order = np.arange(aleph.size) if ordered else order_nibs(aleph)
    a = aleph[order]
    J = a.size
    q = target_rate_bps / bandwidth_hz
    step = np.expm1(q * np.log(2.0))

    pivot = None
    for candidate in range(J - 1, -1, -1):
        if _budget_from(a, step, q, candidate, pivot_indexing) <= 1.0:
            pivot = candidate
        else:
            break

    f_hat = np.zeros(J)
    served = np.zeros(J, dtype=bool)
    if pivot is None:
        fractions = np.zeros(J)
        fractions[-1] = 1.0
        delta_f = 1.0
        closed_form = np.zeros(J)
        closed_form[-1] = bandwidth_hz * np.log2(1.0 + 1.0 / a[-1])
        logger.warning(
            f"Backhaul degraded: strongest NIB cannot reach {target_rate_bps / 1e6:.2f} Mbps "
            f"(aleph={a[-1]:.3g}); full budget assigned without service guarantee"
        )
    else:
        tail = 0.0
        for j in range(J - 1, pivot - 1, -1):
            f_hat[j] = step * (tail + a[j])
            tail += f_hat[j]
        served[pivot:] = True
        if pivot_indexing == "relative":
            delta_f = 1.0 - float(np.sum(f_hat))
        else:
            delta_f = 1.0 - _budget_from(a, step, q, pivot, "absolute")
        delta_f = max(delta_f, 0.0)

        # Re-solve the weaker served fractions against the enlarged strongest one
        fixed = step * np.sum(a[pivot:J - 1] * np.exp2((np.arange(pivot, J - 1) - pivot) * q))
        fractions = np.zeros(J)
        fractions[-1] = (1.0 - fixed) / np.exp2((J - 1 - pivot) * q)
        tail = fractions[-1]
        for j in range(J - 2, pivot - 1, -1):
            fractions[j] = step * (tail + a[j])
            tail += fractions[j]

        closed_form = np.where(served, target_rate_bps, 0.0)
        closed_form[-1] += bandwidth_hz * np.log2(1.0 + delta_f / (1.0 - delta_f + a[-1]))

    sinr = backhaul_sinrs(fractions, a)
    rates = bandwidth_hz * np.log2(1.0 + sinr)
    allocation = NomaAllocation(
        order=order,
        aleph=a,
        fractions_hat=f_hat,
        fractions=fractions,
        served=served,
        pivot=pivot,
        delta_f=float(delta_f),
        sinr=sinr,
        rates_bps=rates,
        closed_form_rates_bps=closed_form,
        sum_rate_bps=float(np.sum(closed_form)),
        achieved_sum_rate_bps=float(np.sum(rates)),
        target_rate_bps=float(target_rate_bps),
        bandwidth_hz=float(bandwidth_hz),
        degraded=pivot is None,
    )
    logger.debug(
        f"NOMA: J={J}, served={allocation.n_served}, delta_f={allocation.delta_f:.4f}, "
        f"R_b*={allocation.sum_rate_bps / 1e6:.2f} Mbps, achieved={allocation.achieved_sum_rate_bps / 1e6:.2f} Mbps"
    )
    return allocation


def oma_baseline(aleph, bandwidth_hz: float) -> np.ndarray:
    """
    OFDMA counterpart: B_H/J and 1/J of the power per NIB, noise scaled to the sub-band

    Returns:
        Per-NIB rates in the input order
    """
    aleph = np.asarray(aleph, dtype=float).ravel()
    J = aleph.size
    if J == 0:
        return np.zeros(0)
    sub_band = bandwidth_hz / J
    return sub_band * np.log2(1.0 + (1.0 / J) / (aleph / J))
