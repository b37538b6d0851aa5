"""
Discrete AdaBoost with reweighting or resampling
"""

from typing import Callable, Optional

import numpy as np

from fda.basis import BasisSystem
from fda.dataset import FunctionalDataSet
from boosting.design import check_iterations, check_labels, prepare_design, run_metadata
from boosting.model import BoostedModel, Stage
from learners.base import WeakLearnerSpec
from utils.errors import BoostingError
from utils.logger import get_logger

logger = get_logger("AdaBoost")

MODES = ("reweight", "resample")
EPSILON_FLOOR = 1e-10


def adaboost_alpha(eps: float, floor: float = EPSILON_FLOOR) -> float:
    """alpha = ln((1 - eps) / eps), with eps floored so a perfect learner gets a finite weight"""
    eps = max(float(eps), floor)
    return float(np.log((1.0 - eps) / eps))


def reweight(D: np.ndarray, misclassified: np.ndarray, alpha: float) -> np.ndarray:
    """D_{m+1} proportional to D_m * exp(alpha * 1[y != g]), renormalized to sum 1"""
    D = D * np.exp(alpha * np.asarray(misclassified, dtype=float))
    return D / D.sum()


def adaboost(dataset: FunctionalDataSet, learner: WeakLearnerSpec, M: int, mode: str = "reweight",
             seed: Optional[int] = 1, beta_basis: Optional[BasisSystem] = None,
             progress_callback: Optional[Callable[[int, int], None]] = None) -> BoostedModel:
    """Fit up to M rounds of AdaBoost.

    In reweight mode the learner sees the full sample with weights n * D_m;
    in resample mode it sees an unweighted bootstrap sample drawn from D_m
    with a generator seeded by seed. Either way eps_m and the update use
    D_m on the full sample. The run stops early when eps_m <= 1e-10 (the
    stage is kept with a capped alpha) or eps_m >= 1/2 (the stage is
    dropped).
    """
    y = check_labels(dataset, "AdaBoost")
    M = check_iterations(M)
    if mode not in MODES:
        raise BoostingError(f"unknown AdaBoost mode '{mode}' (choose from {', '.join(MODES)})")

    design, _ = prepare_design(dataset, learner, beta_basis)
    n = design.n
    rng = np.random.default_rng(seed)
    D = np.full(n, 1.0 / n)

    stages, errors = [], []
    stop_reason = "completed"
    for m in range(1, M + 1):
        if mode == "resample":
            rows = rng.choice(n, size=n, replace=True, p=D)
            base = design.fit(y, classification=True, rows=rows)
        else:
            base = design.fit(y, n * D, classification=True)

        miss = base.predict(design.Z) != y
        eps = float(D @ miss)
        if eps >= 0.5:
            if not stages:
                raise BoostingError(f"the first weak learner is no better than chance (weighted error {eps:.4f})")
            logger.warning(f"Stopping at iteration {m}: weighted error {eps:.4f} is no better than chance")
            stop_reason = "no-better-than-chance"
            break

        alpha = adaboost_alpha(eps)
        stages.append(Stage(alpha, base))
        errors.append(eps)
        logger.debug(f"Iteration {m}: weighted error {eps:.6f}, alpha {alpha:.6f}")
        if progress_callback:
            progress_callback(m, M)

        if eps <= EPSILON_FLOOR:
            logger.warning(f"Stopping at iteration {m}: the weak learner classifies the weighted sample perfectly")
            stop_reason = "perfect-fit"
            break
        D = reweight(D, miss, alpha)

    logger.info(f"AdaBoost fitted {len(stages)} of {M} iterations ({stop_reason})")
    return BoostedModel(
        algorithm="adaboost",
        loss="exponential",
        stages=tuple(stages),
        data_basis=design.data_basis,
        beta_basis=design.beta_basis,
        feature_mean=design.feature_mean,
        learner=learner,
        label_map=(-1.0, 1.0),
        training_loss=tuple(errors),
        stop_reason=stop_reason,
        metadata=run_metadata(design, M, mode=mode, seed=seed),
    )
