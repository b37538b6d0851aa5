"""
Dispatch from a learner specification to the matching fit, and back from JSON
"""

from typing import Dict, Any, Optional

import numpy as np

from learners.base import FittedBase, SignedBase, WeakLearnerSpec
from learners.componentwise import ComponentwiseBase, fit_componentwise
from learners.penalized import PenalizedBase, fit_penalized
from learners.stump import StumpBase, fit_stump
from utils.errors import DataFormatError


def fit_learner(spec: WeakLearnerSpec, Z: np.ndarray, u: np.ndarray, w: Optional[np.ndarray] = None,
                penalty: Optional[np.ndarray] = None, lam: Optional[float] = None,
                classification: bool = False) -> FittedBase:
    """Fit the weak learner named by spec.

    In classification mode stumps vote with majority labels and the linear
    learners are wrapped by sign.
    """
    if spec.kind == "stump":
        return fit_stump(Z, u, w, classification=classification, min_leaf_weight=spec.min_leaf_weight)

    if spec.kind == "componentwise":
        base = fit_componentwise(Z, u, w)
    else:
        base, _ = fit_penalized(Z, u, w, spec.lam if lam is None else lam, penalty)
    return SignedBase(base) if classification else base


def base_from_dict(payload: Dict[str, Any]) -> FittedBase:
    """Rebuild a fitted component from its JSON payload"""
    try:
        kind = payload["kind"]
        if kind == "stump":
            return StumpBase(int(payload["feature"]), payload["threshold"], float(payload["left"]),
                             float(payload["right"]), bool(payload.get("degenerate", False)))
        if kind == "componentwise":
            return ComponentwiseBase(int(payload["index"]), float(payload["slope"]))
        if kind == "penalized":
            lam = float(payload["lam"])
            return PenalizedBase(np.asarray(payload["coefficients"], dtype=float), lam, projection=(lam == 0))
        if kind == "signed":
            return SignedBase(base_from_dict(payload["inner"]))
    except (KeyError, TypeError, ValueError) as e:
        raise DataFormatError(f"malformed base learner record: {e}") from e
    raise DataFormatError(f"unknown base learner kind '{payload.get('kind')}'")
