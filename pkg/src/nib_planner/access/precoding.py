"""
Regularized zero-forcing precoding for one (NIB, RAT) cell
"""

import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)

_COND_LIMIT = 1e12


@dataclass(frozen=True)
class PrecodingState:
    """RZF precoder W = zeta (H H^H + omega I)^-1 H with tr(W^H W) = 1"""

    H: np.ndarray          # (M, K) columns h_k
    W: np.ndarray          # (M, K) columns w_k
    zeta: float
    omega: float
    cross: np.ndarray      # (K, K) |h_k^H w_l|^2

    @property
    def effective(self) -> np.ndarray:
        """|h_k^H w_k|^2"""
        return np.real(np.diag(self.cross)).copy()

    @property
    def n_users(self) -> int:
        return int(self.H.shape[1])

    @property
    def n_antennas(self) -> int:
        return int(self.H.shape[0])


def rzf_precoder(H: np.ndarray, omega: float) -> PrecodingState:
    """
    Build the RZF precoder of a cell

    For K <= M the equivalent form H (H^H H + omega I)^-1 is solved, which also
    gives zero forcing at omega = 0 when H has full column rank.

    Args:
        H: (M, K) channel matrix
        omega: Regularization >= 0

    Returns:
        PrecodingState

    Raises:
        ValueError: If omega = 0 and the Gram matrix is singular
    """
    H = np.atleast_2d(np.asarray(H, dtype=complex))
    M, K = H.shape
    if M < 1 or K < 1:
        raise ValueError("precoding needs at least one antenna and one user")
    if omega < 0:
        raise ValueError("regularization must be non-negative")

    if K <= M:
        gram = H.conj().T @ H + omega * np.eye(K)
    else:
        gram = H @ H.conj().T + omega * np.eye(M)
    if omega == 0 and np.linalg.cond(gram) > _COND_LIMIT:
        raise ValueError("rank-deficient channel: RZF needs omega > 0")
    if K <= M:
        raw = H @ np.linalg.solve(gram, np.eye(K))
    else:
        raw = np.linalg.solve(gram, H)

    zeta = 1.0 / np.sqrt(np.real(np.trace(raw.conj().T @ raw)))
    W = zeta * raw
    cross = np.abs(H.conj().T @ W) ** 2
    return PrecodingState(H=H, W=W, zeta=float(zeta), omega=float(omega), cross=cross)


def default_regularization(n_users: int, noise_power_w: float, tx_power_w: float) -> float:
    """MMSE-style omega = K sigma^2 / P"""
    return n_users * noise_power_w / tx_power_w
