"""
K-fold cross-validation of the number of boosting iterations
"""

from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Dict, Optional

import numpy as np

from boosting.engine import EngineSpec
from fda.dataset import FunctionalDataSet
from modelsel.curve import SelectionCurve
from modelsel.folds import FoldAssignment
from utils.errors import CrossValidationError, FuncBoostError
from utils.logger import get_logger

logger = get_logger("CrossValidation")


def _fold_losses(engine: EngineSpec, dataset: FunctionalDataSet, folds: FoldAssignment,
                 fold: int, M_max: int) -> np.ndarray:
    """Summed held-out loss of one fold at every truncation m = 1..M_max"""
    train, test = folds.split(fold)
    try:
        model = engine.fit(dataset.subset(train), M_max)
        staged = model.staged_scores(dataset.coefficients[test])
    except Exception as e:
        raise CrossValidationError(fold, e) from e

    # Runs that stopped early keep predicting with their last stage
    if staged.shape[1] < M_max:
        staged = np.hstack([staged, np.repeat(staged[:, -1:], M_max - staged.shape[1], axis=1)])

    y = dataset.response[test][:, None]
    if dataset.is_classification:
        labels = np.where(staged >= 0, 1.0, -1.0)
        return np.sum(labels != y, axis=0).astype(float)
    return np.sum((staged - y) ** 2, axis=0)


def cross_validate(engine: EngineSpec, dataset: FunctionalDataSet, folds: FoldAssignment, M_max: int,
                   max_workers: Optional[int] = None,
                   progress_callback: Optional[Callable[[int, int], None]] = None) -> SelectionCurve:
    """Pooled held-out error after m = 1..M_max iterations.

    Each fold is trained once to M_max and its staged predictions give every
    truncation. The error is the misclassification rate for labels and the
    mean squared error otherwise, pooled over all held-out samples: the
    summed held-out loss divided by n, not a mean of per-fold averages. Folds
    run concurrently on up to max_workers threads and are combined in fold
    order.
    """
    if int(M_max) != M_max or M_max < 1:
        raise FuncBoostError(f"M_max must be a positive integer, got {M_max}")
    if dataset.response_kind not in ("scalar", "label"):
        raise FuncBoostError("cross-validation needs a scalar or label response")
    if folds.n != dataset.n:
        raise FuncBoostError(f"fold assignment covers {folds.n} samples, the data set has {dataset.n}")

    workers = max(1, min(int(max_workers or 1), folds.K))
    results: Dict[int, np.ndarray] = {}
    failures: Dict[int, CrossValidationError] = {}
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {
            executor.submit(_fold_losses, engine, dataset, folds, fold, int(M_max)): fold
            for fold in range(folds.K)
        }
        for future in as_completed(futures):
            fold = futures[future]
            try:
                results[fold] = future.result()
                logger.debug(f"Fold {fold} done")
            except CrossValidationError as e:
                logger.error(f"Cross-validation {e}")
                failures[fold] = e
            if progress_callback:
                progress_callback(len(results) + len(failures), folds.K)

    if failures:
        raise failures[min(failures)]

    per_fold = np.vstack([results[fold] for fold in range(folds.K)])
    sizes = folds.sizes.astype(float)
    curve = SelectionCurve(
        per_fold.sum(axis=0) / dataset.n,
        "misclassification" if dataset.is_classification else "mse",
        fold_values=per_fold / sizes[:, None],
    )
    logger.info(f"{folds.K}-fold CV: minimum {curve.metric} {curve.min_value:.4f} at m={curve.m_opt}")
    return curve
