"""
Degrees of freedom and information criteria for L2Boost with a fixed linear smoother
"""

from typing import Tuple

import numpy as np

from boosting.design import prepare_design
from boosting.engine import EngineSpec
from boosting.model import BoostedModel
from fda.dataset import FunctionalDataSet
from modelsel.curve import SelectionCurve
from utils.errors import BoostingError, FuncBoostError
from utils.logger import get_logger

logger = get_logger("Criteria")

CRITERIA = ("aic", "bic")


def _check_smoother(S: np.ndarray) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise FuncBoostError(f"smoother matrix must be square, got shape {S.shape}")
    return S


def l2boost_df(S: np.ndarray, m: int, shrinkage: float = 1.0) -> float:
    """trace(B_m) for the boosting operator B_m = I - (I - nu S)^m"""
    S = _check_smoother(S)
    if int(m) != m or m < 1:
        raise FuncBoostError(f"iteration count must be a positive integer, got {m}")
    n = S.shape[0]
    residual_operator = np.linalg.matrix_power(np.eye(n) - shrinkage * S, int(m))
    return float(n - np.trace(residual_operator))


def df_curve(S: np.ndarray, M_max: int, shrinkage: float = 1.0) -> np.ndarray:
    """df_1..df_M_max; symmetric smoothers go through their eigenvalues"""
    S = _check_smoother(S)
    if int(M_max) != M_max or M_max < 1:
        raise FuncBoostError(f"M_max must be a positive integer, got {M_max}")
    m = np.arange(1, int(M_max) + 1)
    if np.allclose(S, S.T, rtol=0, atol=1e-10 * max(1.0, np.abs(S).max())):
        eig = np.linalg.eigvalsh(0.5 * (S + S.T))
        return np.sum(1.0 - (1.0 - shrinkage * eig[None, :]) ** m[:, None], axis=1)

    n = S.shape[0]
    step = np.eye(n) - shrinkage * S
    power = np.eye(n)
    values = np.empty(m.size)
    for i in range(m.size):
        power = power @ step
        values[i] = n - np.trace(power)
    return values


def aic_bic(df: np.ndarray, rss: np.ndarray, n: int, criterion: str = "aic") -> SelectionCurve:
    """n log(RSS_m / n) + penalty * df_m with penalty 2 (AIC) or log n (BIC)"""
    if criterion not in CRITERIA:
        raise FuncBoostError(f"unknown information criterion '{criterion}'")
    df = np.asarray(df, dtype=float)
    rss = np.asarray(rss, dtype=float)
    if df.shape != rss.shape:
        raise FuncBoostError(f"{df.size} df values for {rss.size} RSS values")
    if n < 1 or np.any(rss < 0):
        raise FuncBoostError("information criteria need n >= 1 and non-negative RSS")

    # Exact interpolation would send log(RSS) to -inf
    rss = np.maximum(rss, np.finfo(float).tiny * n)
    penalty = 2.0 if criterion == "aic" else np.log(n)
    return SelectionCurve(n * np.log(rss / n) + penalty * df, criterion)


def select_by_information(engine: EngineSpec, dataset: FunctionalDataSet, M_max: int,
                          criterion: str = "aic") -> Tuple[SelectionCurve, BoostedModel]:
    """Fit L2Boost once to M_max and score every truncation by AIC or BIC.

    Only the penalized learner is a fixed smoother, so only it is accepted.
    The fitted offset counts as one more degree of freedom on top of trace(B_m).
    """
    if engine.algorithm != "l2boost" or engine.learner.kind != "penalized":
        raise BoostingError("information criteria need L2Boost with the penalized learner")
    design, _ = prepare_design(dataset, engine.learner, engine.beta_basis)
    model = engine.fit(dataset, M_max)
    df = df_curve(design.hat().S, M_max, engine.shrinkage) + 1.0
    curve = aic_bic(df, np.asarray(model.training_loss), dataset.n, criterion)
    logger.info(f"{criterion.upper()} minimum {curve.min_value:.4f} at m={curve.m_opt} (df {df[curve.m_opt - 1]:.3f})")
    return curve, model
