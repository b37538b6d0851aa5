"""
Conversion of discretely sampled curves into basis coefficients
"""

from typing import Optional, Sequence

import numpy as np

from fda.basis import BasisSystem
from fda.dataset import FunctionalDataSet
from fda.gram import penalty_matrix
from fda.linalg import solve_spd
from utils.errors import FuncBoostError, SingularSystemError
from utils.logger import get_logger

logger = get_logger("Smoothing")


def _check_inputs(t_grid: np.ndarray, values: np.ndarray, basis: BasisSystem, lam: float):
    if t_grid.ndim != 1 or t_grid.size < 1:
        raise FuncBoostError("sampling grid must be a non-empty 1-d array")
    if values.shape[-1] != t_grid.size:
        raise FuncBoostError(f"{values.shape[-1]} observations for a grid of {t_grid.size} points")
    if not np.all(np.isfinite(values)):
        raise FuncBoostError("observed values must be finite")
    if not lam >= 0:
        raise FuncBoostError(f"smoothing parameter must be non-negative, got {lam}")
    if lam == 0 and t_grid.size < basis.n_basis:
        raise SingularSystemError(
            f"unpenalized fit of {basis.n_basis} basis functions from only {t_grid.size} grid points"
        )


def _solve(t_grid: np.ndarray, values: np.ndarray, basis: BasisSystem, lam: float, k: int) -> np.ndarray:
    Phi = basis.evaluate(t_grid)
    A = Phi.T @ Phi
    if lam > 0:
        A = A + lam * penalty_matrix(basis, k).R
    rhs = Phi.T @ values.T
    return solve_spd(A, rhs, context=f"{basis.kind} coefficient fit").T


def fit_coefficients(t_grid: Sequence[float], observed_values: Sequence[float], basis: BasisSystem,
                     lam: float = 0.0, k: int = 2) -> np.ndarray:
    """Penalized least-squares coefficients of one sampled curve.

    Minimizes sum_j (v_j - sum_l c_l psi_l(t_j))^2 + lam * c' R_k c through
    the normal equations (Phi'Phi + lam R_k) c = Phi' v.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    values = np.asarray(observed_values, dtype=float)
    if values.ndim != 1:
        raise FuncBoostError("fit_coefficients expects a single curve; use smooth_curves for batches")
    _check_inputs(t_grid, values, basis, lam)
    return _solve(t_grid, values, basis, lam, k)


def smooth_curves(t_grid: Sequence[float], values: np.ndarray, basis: BasisSystem, lam: float = 0.0,
                  k: int = 2, response: Optional[np.ndarray] = None,
                  response_kind: str = "none") -> FunctionalDataSet:
    """Expand every row of an n x G value matrix in the basis"""
    t_grid = np.asarray(t_grid, dtype=float)
    values = np.atleast_2d(np.asarray(values, dtype=float))
    _check_inputs(t_grid, values, basis, lam)

    C = _solve(t_grid, values, basis, lam, k)
    logger.debug(f"Expanded {values.shape[0]} curves into {basis.n_basis} {basis.kind} coefficients")
    return FunctionalDataSet(basis, C, response=response, response_kind=response_kind)
