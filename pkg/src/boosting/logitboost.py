"""
LogitBoost: Newton steps on the logistic loss by weighted least squares
"""

from typing import Callable, Optional, Tuple

import numpy as np
from scipy.special import expit

from fda.basis import BasisSystem
from fda.dataset import FunctionalDataSet
from boosting.design import check_iterations, check_labels, prepare_design, run_metadata
from boosting.losses import LogisticLoss
from boosting.model import BoostedModel, Stage
from learners.base import WeakLearnerSpec
from utils.logger import get_logger

logger = get_logger("LogitBoost")

WEIGHT_FLOOR = 1e-10
RESPONSE_CLAMP = 4.0
STEP = 0.5


def working_response(y: np.ndarray, p: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Newton weights D = p(1 - p) and working responses (y* - p) / D, y* = (y + 1) / 2.

    D is floored at 1e-10 and |u| is clamped to 4.
    """
    y_star = 0.5 * (np.asarray(y, dtype=float) + 1.0)
    D = np.maximum(p * (1.0 - p), WEIGHT_FLOOR)
    u = np.clip((y_star - p) / D, -RESPONSE_CLAMP, RESPONSE_CLAMP)
    return u, D


def logitboost(dataset: FunctionalDataSet, learner: WeakLearnerSpec, M: int,
               beta_basis: Optional[BasisSystem] = None,
               progress_callback: Optional[Callable[[int, int], None]] = None) -> BoostedModel:
    """Fit f_m = f_{m-1} + g_m / 2 starting from p = 1/2.

    The final score estimates half the log-odds, so P(y = +1 | x) is
    1 / (1 + exp(-2 f)). Training loss records the mean logistic loss of 2 f.
    """
    y = check_labels(dataset, "LogitBoost")
    M = check_iterations(M)
    design, _ = prepare_design(dataset, learner, beta_basis)

    loss = LogisticLoss()
    f = np.zeros(design.n)
    p = np.full(design.n, 0.5)
    stages, risks = [], []
    clamped = 0
    for m in range(1, M + 1):
        u, D = working_response(y, p)
        clamped += int(np.count_nonzero(np.abs(u) >= RESPONSE_CLAMP))
        base = design.fit(u, D)
        f = f + STEP * base.predict(design.Z)
        p = expit(2.0 * f)
        stages.append(Stage(STEP, base))
        risks.append(loss.risk(y, 2.0 * f))
        logger.debug(f"Iteration {m}: training logistic loss {risks[-1]:.6f}")
        if progress_callback:
            progress_callback(m, M)

    if clamped:
        logger.warning(f"Clamped {clamped} working responses to +/-{RESPONSE_CLAMP:g} over {M} iterations")
    logger.info(f"LogitBoost fitted {M} iterations, final training logistic loss {risks[-1]:.6f}")
    return BoostedModel(
        algorithm="logitboost",
        loss=loss.kind,
        stages=tuple(stages),
        data_basis=design.data_basis,
        beta_basis=design.beta_basis,
        feature_mean=design.feature_mean,
        learner=learner,
        label_map=(-1.0, 1.0),
        training_loss=tuple(risks),
        metadata=run_metadata(design, M),
    )
