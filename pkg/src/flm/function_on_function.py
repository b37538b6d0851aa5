"""
Function-on-function linear model: y(t) = alpha(t) + integral of beta(s, t) x(s) ds
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from fda.basis import BasisSystem
from fda.dataset import FunctionalDataSet
from fda.gram import gram_matrix
from fda.linalg import CONDITION_LIMIT
from utils.errors import BasisError, FuncBoostError, SingularSystemError
from utils.logger import get_logger

logger = get_logger("FunctionOnFunction")


@dataclass(frozen=True, eq=False)
class FunctionOnFunctionModel:
    """alpha over the response basis and the K1 x K2 surface matrix B"""

    alpha: np.ndarray
    B: np.ndarray
    predictor_basis: BasisSystem
    response_basis: BasisSystem
    lam: float
    training_loss: float

    def __post_init__(self):
        if self.B.shape != (self.predictor_basis.n_basis, self.response_basis.n_basis):
            raise FuncBoostError("surface matrix does not match the two bases")
        if self.alpha.shape != (self.response_basis.n_basis,):
            raise FuncBoostError("intercept coefficients do not match the response basis")
        if not (np.all(np.isfinite(self.B)) and np.all(np.isfinite(self.alpha))):
            raise FuncBoostError("model coefficients must be finite")

    def predict(self, coefficients: np.ndarray) -> np.ndarray:
        """Response-basis coefficients of the predicted curves"""
        C = np.atleast_2d(np.asarray(coefficients, dtype=float))
        if C.shape[1] != self.predictor_basis.n_basis:
            raise BasisError("curves are not expressed in the predictor basis")
        return self.alpha + C @ gram_matrix(self.predictor_basis).J @ self.B

    def surface(self, s_grid: Sequence[float], t_grid: Sequence[float]) -> np.ndarray:
        """beta(s, t) on a grid, rows over s"""
        return self.predictor_basis.evaluate(s_grid) @ self.B @ self.response_basis.evaluate(t_grid).T


def integrated_loss(residuals: np.ndarray, J_response: np.ndarray) -> float:
    """Sum over curves of the integrated squared residual curve"""
    return float(np.sum((residuals @ J_response) * residuals))


def fit_fof(X: FunctionalDataSet, Y: FunctionalDataSet, lam: float = 0.0) -> FunctionOnFunctionModel:
    """Fit alpha and B by minimizing the integrated squared loss plus lam * ||B||_F^2.

    After expansion the stationarity condition is Zc'Zc B Jy + lam B = Zc'Yc Jy.
    Diagonalizing Zc'Zc and the response Gram Jy decouples it entrywise.
    """
    if X.n != Y.n:
        raise FuncBoostError(f"predictor and response sets hold {X.n} and {Y.n} curves")
    if not np.allclose(X.basis.domain, Y.basis.domain):
        raise BasisError("predictor and response bases must share the domain")
    if not lam >= 0:
        raise FuncBoostError(f"penalty weight must be non-negative, got {lam}")

    Jx = gram_matrix(X.basis).J
    Jy = gram_matrix(Y.basis).J
    Z = X.coefficients @ Jx
    Yc_raw = Y.coefficients

    z_mean = Z.mean(axis=0)
    y_mean = Yc_raw.mean(axis=0)
    Zc = Z - z_mean
    Yc = Yc_raw - y_mean

    eig_z, U = scipy.linalg.eigh(Zc.T @ Zc)
    eig_y, V = scipy.linalg.eigh(Jy)
    eig_z = np.clip(eig_z, 0.0, None)
    denom = np.outer(eig_z, eig_y) + lam
    if denom.min() <= 0 or denom.max() / denom.min() > CONDITION_LIMIT:
        raise SingularSystemError(
            f"function-on-function system is singular at lambda={lam} "
            f"(condition estimate {denom.max() / max(denom.min(), 1e-300):.3e})"
        )

    rhs = U.T @ (Zc.T @ Yc @ Jy) @ V
    B = U @ (rhs / denom) @ V.T
    alpha = y_mean - z_mean @ B

    loss = integrated_loss(Yc - Zc @ B, Jy)
    logger.info(f"Function-on-function fit: lambda={lam}, integrated training loss={loss:.6g}")
    return FunctionOnFunctionModel(alpha, B, X.basis, Y.basis, float(lam), loss)
