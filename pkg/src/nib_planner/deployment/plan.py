"""
Deployment plan and coverage matrix types
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Literal

import numpy as np
from scipy import sparse

PlanMethod = Literal["gdc-greedy", "gdc-exact", "gdc-lattice", "hex"]


@dataclass(frozen=True)
class CoverageMatrix:
    """Boolean user-by-candidate matrix, d_kl = 1 iff ||u_k - u_l|| <= r"""

    matrix: sparse.csr_matrix
    positions: np.ndarray
    radius: float

    @property
    def size(self) -> int:
        return int(self.matrix.shape[0])

    def dense(self) -> np.ndarray:
        return self.matrix.toarray().astype(bool)

    def column_members(self) -> list:
        """Row indices covered by each candidate column"""
        csc = self.matrix.tocsc()
        return [csc.indices[csc.indptr[c]:csc.indptr[c + 1]] for c in range(csc.shape[1])]


@dataclass(frozen=True)
class DeploymentPlan:
    """Beam centres of radius r covering every user"""

    centers: np.ndarray              # (J, 2)
    radius: float
    method: PlanMethod
    center_ids: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))  # user ids, -1 for grid points

    @property
    def n_nibs(self) -> int:
        return int(self.centers.shape[0])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": self.method,
            "radius_m": float(self.radius),
            "n_nibs": self.n_nibs,
            "centers": [[float(x), float(y)] for x, y in self.centers],
            "center_user_ids": [int(i) for i in self.center_ids],
        }
