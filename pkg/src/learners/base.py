"""
Weak-learner specifications and fitted base functions
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Any, Optional

import numpy as np

from utils.errors import LearnerError

LEARNER_KINDS = ("penalized", "componentwise", "stump")


@dataclass(frozen=True)
class WeakLearnerSpec:
    """Which weak learner to fit and with what settings.

    penalized: lam and penalty_order, or df_target (lam found by bisection);
    componentwise: no parameters; stump: min_leaf_weight.
    """

    kind: str
    lam: float = 1.0
    penalty_order: int = 2
    df_target: Optional[float] = None
    min_leaf_weight: float = 0.0

    def __post_init__(self):
        kind = self.kind.lower()
        if kind in ("penalized-ls", "penalized_ls"):
            kind = "penalized"
        if kind not in LEARNER_KINDS:
            raise LearnerError(f"unknown weak learner '{self.kind}'")
        object.__setattr__(self, "kind", kind)
        if not self.lam >= 0:
            raise LearnerError(f"penalty weight must be non-negative, got {self.lam}")
        if self.penalty_order < 0:
            raise LearnerError(f"penalty order must be non-negative, got {self.penalty_order}")
        if self.df_target is not None and not self.df_target > 0:
            raise LearnerError(f"target degrees of freedom must be positive, got {self.df_target}")
        if not self.min_leaf_weight >= 0:
            raise LearnerError("minimum leaf weight must be non-negative")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "lam": float(self.lam),
            "penalty_order": int(self.penalty_order),
            "df_target": None if self.df_target is None else float(self.df_target),
            "min_leaf_weight": float(self.min_leaf_weight),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "WeakLearnerSpec":
        return cls(**data)


class FittedBase(ABC):
    """One fitted component g_m, evaluated on rows of design scores"""

    kind: str = ""

    @abstractmethod
    def predict(self, Z: np.ndarray) -> np.ndarray:
        """Values of the component for every row of Z"""

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready payload"""

    def linear_coefficients(self, n_features: int) -> Optional[np.ndarray]:
        """Coefficient vector when the component is linear in the scores"""
        return None


@dataclass(frozen=True)
class SignedBase(FittedBase):
    """Turns a real-valued component into a +/-1 classifier (sign(0) = +1)"""

    inner: FittedBase
    kind = "signed"

    def predict(self, Z: np.ndarray) -> np.ndarray:
        return np.where(self.inner.predict(Z) >= 0, 1.0, -1.0)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "inner": self.inner.to_dict()}


@dataclass(frozen=True, eq=False)
class HatMatrixView:
    """n x n linear smoother S of a linear weak learner on a fixed design"""

    S: np.ndarray

    def __post_init__(self):
        S = np.array(self.S, dtype=float)
        if S.ndim != 2 or S.shape[0] != S.shape[1]:
            raise LearnerError("a hat matrix must be square")
        S.flags.writeable = False
        object.__setattr__(self, "S", S)

    @property
    def df(self) -> float:
        return float(np.trace(self.S))


def as_weights(w: Optional[np.ndarray], n: int) -> np.ndarray:
    """Validated weight vector; uniform when w is None"""
    if w is None:
        return np.ones(n)
    w = np.asarray(w, dtype=float)
    if w.shape != (n,):
        raise LearnerError(f"weight vector of shape {w.shape} for {n} samples")
    if np.any(~np.isfinite(w)) or np.any(w < 0):
        raise LearnerError("weights must be finite and non-negative")
    if not w.sum() > 0:
        raise LearnerError("all weights are zero")
    return w


def evaluate_base(fitted: FittedBase, z: np.ndarray):
    """g_m(x) for one score vector (returns a float) or a matrix of rows"""
    z = np.asarray(z, dtype=float)
    if z.ndim == 1:
        return float(fitted.predict(z[None, :])[0])
    return fitted.predict(z)
