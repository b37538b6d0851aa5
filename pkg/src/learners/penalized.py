"""
Penalized functional least squares: a linear smoother with tunable degrees of freedom
"""

from dataclasses import dataclass
from typing import Dict, Any, Optional, Tuple

import numpy as np

from fda.basis import BasisSystem
from fda.linalg import solve_spd
from flm.scalar import FunctionalLinearModel
from learners.base import FittedBase, HatMatrixView, as_weights
from utils.errors import LearnerError, SingularSystemError
from utils.logger import get_logger

logger = get_logger("PenalizedLS")

DF_TOLERANCE = 0.01
NULL_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class PenalizedBase(FittedBase):
    """beta coefficients fitted without intercept; projection flags lam = 0"""

    coefficients: np.ndarray
    lam: float
    projection: bool = False
    kind = "penalized"

    def predict(self, Z: np.ndarray) -> np.ndarray:
        return np.atleast_2d(Z) @ self.coefficients

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "coefficients": [float(v) for v in self.coefficients],
            "lam": float(self.lam),
        }

    def linear_coefficients(self, n_features: int) -> Optional[np.ndarray]:
        return np.array(self.coefficients, dtype=float)

    def as_linear_model(self, beta_basis: BasisSystem, intercept: float = 0.0, k: int = 2,
                        cross_gram: Optional[np.ndarray] = None) -> FunctionalLinearModel:
        """The fitted coefficients as beta(t) on the basis the scores were taken against"""
        return FunctionalLinearModel(float(intercept), self.coefficients, beta_basis, self.lam, int(k), cross_gram)


def _penalty(R: Optional[np.ndarray], K: int) -> np.ndarray:
    if R is None:
        return np.eye(K)
    R = np.asarray(R, dtype=float)
    if R.shape != (K, K):
        raise LearnerError(f"penalty matrix of shape {R.shape} for {K} features")
    return R


def hat_matrix(Z: np.ndarray, lam: float, R: Optional[np.ndarray] = None) -> HatMatrixView:
    """S = Z (Z'Z + lam R)^-1 Z' on the unweighted design"""
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    R = _penalty(R, Z.shape[1])
    A = Z.T @ Z + lam * R
    S = Z @ solve_spd(A, Z.T, context="hat matrix")
    return HatMatrixView(0.5 * (S + S.T))


def fit_penalized(Z: np.ndarray, u: np.ndarray, w: Optional[np.ndarray] = None, lam: float = 1.0,
                  R: Optional[np.ndarray] = None,
                  with_hat: bool = False) -> Tuple[PenalizedBase, Optional[HatMatrixView]]:
    """Weighted penalized least squares b = (Z'WZ + lam R)^-1 Z'W u.

    lam = 0 gives the unpenalized projection learner, which is allowed but
    flagged on the returned base. R defaults to the identity.
    """
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    u = np.asarray(u, dtype=float)
    n, K = Z.shape
    if u.shape != (n,):
        raise LearnerError(f"targets of shape {u.shape} for {n} samples")
    w = as_weights(w, n)
    if not lam >= 0:
        raise LearnerError(f"penalty weight must be non-negative, got {lam}")
    R = _penalty(R, K)

    A = Z.T @ (w[:, None] * Z) + lam * R
    b = solve_spd(A, Z.T @ (w * u), context="penalized weak learner")

    hat = hat_matrix(Z, lam, R) if with_hat else None
    return PenalizedBase(b, float(lam), projection=(lam == 0)), hat


def degrees_of_freedom(Z: np.ndarray, lam: float, R: Optional[np.ndarray] = None) -> float:
    """trace of the smoother matrix, computed in feature space"""
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    G = Z.T @ Z
    R = _penalty(R, Z.shape[1])
    return float(np.trace(solve_spd(G + lam * R, G, context="degrees of freedom")))


def minimum_df(Z: np.ndarray, R: Optional[np.ndarray] = None) -> float:
    """Limit of trace(S(lam)) as lam grows: the rank of Z on the null space of R"""
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    R = _penalty(R, Z.shape[1])
    eig, vectors = np.linalg.eigh(0.5 * (R + R.T))
    null = vectors[:, eig <= NULL_TOLERANCE * max(eig.max(), 0.0)]
    if null.shape[1] == 0:
        return 0.0
    return float(np.linalg.matrix_rank(Z @ null))


def lambda_for_df(Z: np.ndarray, R: Optional[np.ndarray], df_target: float,
                  tolerance: float = DF_TOLERANCE, max_steps: int = 200) -> float:
    """Penalty weight whose smoother has trace(S) within tolerance of df_target.

    The reachable range is (minimum_df, rank Z]. A target at the lower end
    (within tolerance) is clamped to a weight just inside it; targets below
    raise LearnerError.
    """
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    K = Z.shape[1]
    if not 0 < df_target <= K:
        raise LearnerError(f"target degrees of freedom must lie in (0, {K}], got {df_target}")
    R = _penalty(R, K)

    floor = minimum_df(Z, R)
    if df_target < floor - tolerance:
        raise LearnerError(
            f"target of {df_target} degrees of freedom is unreachable: the penalty leaves {floor:g} "
            f"directions unpenalized, so the reachable range is ({floor:g}, {K}]"
        )
    if df_target < floor + tolerance:
        logger.warning(f"Target of {df_target} degrees of freedom sits at the unpenalized floor {floor:g}; "
                       f"using a weight that gives {floor:g} + {0.5 * tolerance:g}")
        df_target = floor + 0.5 * tolerance

    def df(lam: float) -> float:
        try:
            return degrees_of_freedom(Z, lam, R)
        except SingularSystemError as e:
            raise LearnerError(f"cannot reach {df_target} degrees of freedom: {e}") from e

    if df_target >= K - tolerance and abs(df(0.0) - df_target) < tolerance:
        logger.warning("Target degrees of freedom equal the feature count; using the projection learner")
        return 0.0

    # Bracket in log space, starting from the scale where both terms balance
    scale = np.trace(Z.T @ Z) / max(np.trace(R), 1e-300)
    lo = hi = max(scale, 1e-300)
    for _ in range(60):
        if df(hi) <= df_target:
            break
        hi *= 10.0
    else:
        raise LearnerError(f"penalty cannot shrink the learner to {df_target} degrees of freedom")
    for _ in range(60):
        if df(lo) >= df_target:
            break
        lo /= 10.0
    else:
        raise LearnerError(f"penalty cannot relax the learner to {df_target} degrees of freedom")

    log_lo, log_hi = np.log(lo), np.log(hi)
    lam = hi
    for _ in range(max_steps):
        lam = float(np.exp(0.5 * (log_lo + log_hi)))
        current = df(lam)
        if abs(current - df_target) < tolerance:
            break
        if current > df_target:
            log_lo = np.log(lam)
        else:
            log_hi = np.log(lam)

    logger.info(f"Penalty weight {lam:.6g} gives {df(lam):.3f} degrees of freedom (target {df_target})")
    return lam
