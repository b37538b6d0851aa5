"""
Scalar-on-function linear models: y = beta_0 + integral of beta(t) x(t) dt
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from fda.basis import BasisSystem
from fda.dataset import FunctionalDataSet
from fda.gram import cross_gram, penalty_matrix
from fda.linalg import solve_spd
from utils.errors import BasisError, FuncBoostError
from utils.logger import get_logger

logger = get_logger("FLM")


@dataclass(frozen=True, eq=False)
class DesignScores:
    """Z = C J where J is the cross-Gram between the data basis and the beta basis.

    Z[i, j] is the integral of x_i(t) * psi_j(t).
    """

    Z: np.ndarray
    J: np.ndarray
    data_basis: BasisSystem
    beta_basis: BasisSystem

    def project(self, coefficients: np.ndarray) -> np.ndarray:
        """Scores of new curves given in the data basis"""
        C = np.atleast_2d(np.asarray(coefficients, dtype=float))
        if C.shape[1] != self.J.shape[0]:
            raise BasisError(
                f"curves carry {C.shape[1]} coefficients but the data basis has {self.J.shape[0]} functions"
            )
        return C @ self.J


@dataclass(frozen=True, eq=False)
class FunctionalLinearModel:
    """Fitted intercept and coefficient vector of beta(t) = sum_l b_l psi_l(t)"""

    intercept: float
    coefficients: np.ndarray
    beta_basis: BasisSystem
    lam: float = 0.0
    k: int = 2
    cross_gram: Optional[np.ndarray] = None

    def __post_init__(self):
        b = np.array(self.coefficients, dtype=float)
        if b.ndim != 1 or b.size != self.beta_basis.n_basis:
            raise FuncBoostError(f"coefficient vector must have {self.beta_basis.n_basis} entries")
        if not (np.all(np.isfinite(b)) and np.isfinite(self.intercept)):
            raise FuncBoostError("model coefficients must be finite")
        b.flags.writeable = False
        object.__setattr__(self, "coefficients", b)

    def predict_scores(self, Z: np.ndarray) -> np.ndarray:
        """Predictions from precomputed design scores"""
        return self.intercept + np.atleast_2d(Z) @ self.coefficients

    def beta(self, t_grid: Sequence[float]) -> np.ndarray:
        """Coefficient function evaluated on a grid"""
        return self.beta_basis.evaluate(t_grid) @ self.coefficients


def design_scores(dataset: FunctionalDataSet, beta_basis: Optional[BasisSystem] = None) -> DesignScores:
    """Integrals of every curve against every beta basis function"""
    beta_basis = beta_basis or dataset.basis
    J = cross_gram(dataset.basis, beta_basis)
    return DesignScores(dataset.coefficients @ J, J, dataset.basis, beta_basis)


def fit_flm(Z: np.ndarray, y: np.ndarray, lam: float = 0.0, R: Optional[np.ndarray] = None,
            beta_basis: Optional[BasisSystem] = None, k: int = 2,
            cross_gram_matrix: Optional[np.ndarray] = None) -> FunctionalLinearModel:
    """Penalized least squares for beta on internally centered data.

    b = (Zc'Zc + lam R)^-1 Zc'yc and beta_0 = mean(y) - mean(Z) b. When R is
    not given it is the k-th derivative penalty of beta_basis.
    """
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    y = np.asarray(y, dtype=float)
    if not (np.all(np.isfinite(Z)) and np.all(np.isfinite(y))):
        raise FuncBoostError("design scores and response must be finite")
    if y.ndim != 1 or y.size != Z.shape[0]:
        raise FuncBoostError(f"response of length {y.size} does not match {Z.shape[0]} rows of Z")
    if not lam >= 0:
        raise FuncBoostError(f"penalty weight must be non-negative, got {lam}")
    if beta_basis is None:
        raise FuncBoostError("fit_flm needs the beta basis to describe the fitted coefficient function")

    z_mean = Z.mean(axis=0)
    y_mean = float(y.mean())
    Zc = Z - z_mean
    yc = y - y_mean

    A = Zc.T @ Zc
    if lam > 0:
        if R is None:
            R = penalty_matrix(beta_basis, k).R
        A = A + lam * np.asarray(R, dtype=float)
    b = solve_spd(A, Zc.T @ yc, context="functional linear model")

    intercept = y_mean - float(z_mean @ b)
    logger.debug(f"Fitted functional linear model with lambda={lam}, |b|={np.linalg.norm(b):.4g}")
    return FunctionalLinearModel(intercept, b, beta_basis, float(lam), int(k), cross_gram_matrix)


def fit_functional_regression(dataset: FunctionalDataSet, beta_basis: Optional[BasisSystem] = None,
                              lam: float = 0.0, k: int = 2) -> FunctionalLinearModel:
    """Scores, penalty and fit in one call for a scalar-response data set"""
    if dataset.response_kind not in ("scalar", "label"):
        raise FuncBoostError("functional regression needs a scalar response")
    scores = design_scores(dataset, beta_basis)
    R = penalty_matrix(scores.beta_basis, k).R if lam > 0 else None
    return fit_flm(scores.Z, dataset.response, lam, R, scores.beta_basis, k, scores.J)


def predict_flm(model: FunctionalLinearModel, coefficients: np.ndarray,
                classify: bool = False) -> np.ndarray:
    """beta_0 + integral of beta * x for curves in the fit-time data basis"""
    if model.cross_gram is None:
        raise FuncBoostError("model was fitted from raw scores; use predict_scores")
    C = np.atleast_2d(np.asarray(coefficients, dtype=float))
    if C.shape[1] != model.cross_gram.shape[0]:
        raise BasisError(
            f"curves carry {C.shape[1]} coefficients but the model's data basis has "
            f"{model.cross_gram.shape[0]} functions"
        )
    y_hat = model.predict_scores(C @ model.cross_gram)
    if classify:
        return np.where(y_hat >= 0, 1.0, -1.0)
    return y_hat
