"""
Componentwise learner: one basis direction per step
"""

from dataclasses import dataclass
from typing import Dict, Any, Optional

import numpy as np

from learners.base import FittedBase, as_weights
from utils.errors import LearnerError

# Risks within this relative distance of the minimum count as ties
TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ComponentwiseBase(FittedBase):
    """slope * z_index with exactly one active coefficient"""

    index: int
    slope: float
    kind = "componentwise"

    def predict(self, Z: np.ndarray) -> np.ndarray:
        return self.slope * np.atleast_2d(Z)[:, self.index]

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "index": int(self.index), "slope": float(self.slope)}

    def linear_coefficients(self, n_features: int) -> Optional[np.ndarray]:
        b = np.zeros(n_features)
        b[self.index] = self.slope
        return b


def fit_componentwise(Z: np.ndarray, u: np.ndarray, w: Optional[np.ndarray] = None) -> ComponentwiseBase:
    """Weighted 1-d least squares on every column; keep the one with least weighted risk.

    Ties go to the smallest column index.
    """
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    u = np.asarray(u, dtype=float)
    n, K = Z.shape
    if u.shape != (n,):
        raise LearnerError(f"targets of shape {u.shape} for {n} samples")
    w = as_weights(w, n)

    norms = w @ (Z ** 2)
    usable = norms > 0
    if not np.any(usable):
        raise LearnerError("every score column has zero weighted norm")

    slopes = np.zeros(K)
    slopes[usable] = ((w * u) @ Z[:, usable]) / norms[usable]
    residuals = u[:, None] - Z * slopes
    risks = w @ (residuals ** 2)
    risks[~usable] = np.inf

    best = risks.min()
    scale = max(best, float(w @ u ** 2), np.finfo(float).tiny)
    index = int(np.flatnonzero(risks <= best + TIE_TOLERANCE * scale)[0])
    return ComponentwiseBase(index, float(slopes[index]))
