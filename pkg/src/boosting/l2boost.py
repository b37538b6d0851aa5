"""
L2Boost: repeated least-squares fits to the current residuals
"""

from typing import Callable, Optional

import numpy as np

from fda.basis import BasisSystem
from fda.dataset import FunctionalDataSet
from boosting.design import check_iterations, prepare_design, run_metadata
from boosting.losses import QuadraticLoss
from boosting.model import BoostedModel, Stage
from learners.base import WeakLearnerSpec
from utils.errors import BoostingError
from utils.logger import get_logger

logger = get_logger("L2Boost")


def l2boost(dataset: FunctionalDataSet, learner: WeakLearnerSpec, M: int, shrinkage: float = 1.0,
            beta_basis: Optional[BasisSystem] = None,
            progress_callback: Optional[Callable[[int, int], None]] = None) -> BoostedModel:
    """Fit f_m = offset + nu * (g_1 + ... + g_m), each g fitted to y - f_{m-1}.

    The offset is the response mean; labels are boosted as numbers and
    classified by sign. Every stage weight is nu, so the first iterate is
    offset + nu * g_1 and reduces to offset + g_1 at nu = 1. The training RSS
    of every truncation is kept as the model's training loss.
    """
    if dataset.response_kind not in ("scalar", "label"):
        raise BoostingError(f"L2Boost needs a scalar response, got a '{dataset.response_kind}' response")
    M = check_iterations(M)
    if not 0 < shrinkage <= 1:
        raise BoostingError(f"shrinkage must lie in (0, 1], got {shrinkage}")

    design, mean_response = prepare_design(dataset, learner, beta_basis)
    y = np.asarray(dataset.response, dtype=float)
    offset = float(y.mean()) if mean_response is None else float(mean_response)
    target = y - offset

    loss = QuadraticLoss()
    f = np.zeros(design.n)
    stages, rss = [], []
    for m in range(1, M + 1):
        u = loss.negative_gradient(target, f)
        base = design.fit(u)
        f = f + shrinkage * base.predict(design.Z)
        stages.append(Stage(float(shrinkage), base))
        rss.append(float(np.sum((target - f) ** 2)))
        logger.debug(f"Iteration {m}: training RSS {rss[-1]:.6g}")
        if progress_callback:
            progress_callback(m, M)

    logger.info(f"L2Boost fitted {M} iterations, final training RSS {rss[-1]:.6g}")
    return BoostedModel(
        algorithm="l2boost",
        loss=loss.kind,
        stages=tuple(stages),
        data_basis=design.data_basis,
        beta_basis=design.beta_basis,
        feature_mean=design.feature_mean,
        learner=learner,
        offset=offset,
        label_map=(-1.0, 1.0) if dataset.is_classification else None,
        training_loss=tuple(rss),
        metadata=run_metadata(design, M, shrinkage=float(shrinkage)),
    )
