"""
Decision stumps on design scores
"""

from dataclasses import dataclass
from typing import Dict, Any, Optional

import numpy as np

from learners.base import FittedBase, as_weights
from utils.errors import LearnerError
from utils.logger import get_logger

logger = get_logger("Stump")

TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class StumpBase(FittedBase):
    """z_feature <= threshold -> left, otherwise right.

    A degenerate stump (no admissible split) has threshold None and predicts
    its single leaf value everywhere.
    """

    feature: int
    threshold: Optional[float]
    left: float
    right: float
    degenerate: bool = False
    kind = "stump"

    def predict(self, Z: np.ndarray) -> np.ndarray:
        Z = np.atleast_2d(Z)
        if self.threshold is None:
            return np.full(Z.shape[0], self.left)
        return np.where(Z[:, self.feature] <= self.threshold, self.left, self.right)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "feature": int(self.feature),
            "threshold": None if self.threshold is None else float(self.threshold),
            "left": float(self.left),
            "right": float(self.right),
            "degenerate": bool(self.degenerate),
        }


def _majority(positive: np.ndarray, negative: np.ndarray) -> np.ndarray:
    return np.where(positive >= negative, 1.0, -1.0)


def fit_stump(Z: np.ndarray, targets: np.ndarray, w: Optional[np.ndarray] = None,
              classification: bool = False, min_leaf_weight: float = 0.0) -> StumpBase:
    """Exhaustive single-split search over every score column.

    Thresholds are midpoints between consecutive distinct sorted values.
    Regression leaves hold weighted means and minimize weighted squared
    error; classification leaves hold weighted majority labels (ties +1)
    and minimize weighted misclassification. Ties go to the smaller feature,
    then the smaller threshold.
    """
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    t = np.asarray(targets, dtype=float)
    n, K = Z.shape
    if n < 2:
        raise LearnerError("a stump needs at least two samples")
    if t.shape != (n,):
        raise LearnerError(f"targets of shape {t.shape} for {n} samples")
    w = as_weights(w, n)
    if classification and np.any((t != 1.0) & (t != -1.0)):
        raise LearnerError("classification stumps need -1/+1 targets")

    order = np.argsort(Z, axis=0, kind="stable")
    zs = np.take_along_axis(Z, order, axis=0)
    ws = w[order]
    ts = t[order]

    # Split after sorted row i is admissible when the next value differs
    W_left = np.cumsum(ws, axis=0)[:-1]
    W_total = w.sum()
    W_right = W_total - W_left
    valid = (zs[1:] > zs[:-1]) & (W_left > 0) & (W_right > 0)
    valid &= (W_left >= min_leaf_weight) & (W_right >= min_leaf_weight)

    if classification:
        pos = np.cumsum(ws * (ts > 0), axis=0)[:-1]
        neg = np.cumsum(ws * (ts < 0), axis=0)[:-1]
        pos_total = float(w @ (t > 0))
        neg_total = float(w @ (t < 0))
        errors = np.minimum(pos, neg) + np.minimum(pos_total - pos, neg_total - neg)
        scale = W_total
    else:
        S_left = np.cumsum(ws * ts, axis=0)[:-1]
        S_total = float(w @ t)
        Q_total = float(w @ t ** 2)
        with np.errstate(divide="ignore", invalid="ignore"):
            errors = Q_total - S_left ** 2 / W_left - (S_total - S_left) ** 2 / W_right
        scale = max(Q_total, np.finfo(float).tiny)

    errors = np.where(valid, errors, np.inf)
    if not np.any(valid):
        return _single_leaf(t, w, classification)

    best = errors.min()
    ties = errors <= best + TIE_TOLERANCE * scale
    feature = int(np.flatnonzero(ties.any(axis=0))[0])
    row = int(np.argmax(ties[:, feature]))
    threshold = 0.5 * (zs[row, feature] + zs[row + 1, feature])

    if classification:
        left = float(_majority(pos[row, feature], neg[row, feature]))
        right = float(_majority(pos_total - pos[row, feature], neg_total - neg[row, feature]))
    else:
        left = float(S_left[row, feature] / W_left[row, feature])
        right = float((S_total - S_left[row, feature]) / W_right[row, feature])
    return StumpBase(feature, float(threshold), left, right)


def _single_leaf(t: np.ndarray, w: np.ndarray, classification: bool) -> StumpBase:
    if classification:
        value = float(_majority(w @ (t > 0), w @ (t < 0)))
    else:
        value = float(w @ t / w.sum())
    logger.warning("No admissible split (constant features); fitting a single-leaf stump")
    return StumpBase(0, None, value, value, degenerate=True)
