"""
Symmetric positive-definite solves with condition reporting
"""

import numpy as np
import scipy.linalg

from utils.errors import SingularSystemError

# Systems whose scaled condition estimate exceeds this are refused
CONDITION_LIMIT = 1e12


def condition_estimate(A: np.ndarray) -> float:
    """2-norm condition number of A after symmetric diagonal scaling"""
    d = np.diag(A)
    if np.any(d <= 0):
        return np.inf
    s = 1.0 / np.sqrt(d)
    return float(np.linalg.cond(A * np.outer(s, s)))


def solve_spd(A: np.ndarray, B: np.ndarray, context: str = "normal equations") -> np.ndarray:
    """Solve A x = B for symmetric positive-definite A.

    The system is equilibrated by its diagonal, checked against
    CONDITION_LIMIT and solved by Cholesky. Never regularizes silently.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(B))):
        raise SingularSystemError(f"{context}: non-finite entries in the system")

    A = 0.5 * (A + A.T)
    cond = condition_estimate(A)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise SingularSystemError(f"{context}: condition estimate {cond:.3e} exceeds {CONDITION_LIMIT:.0e}")

    s = 1.0 / np.sqrt(np.diag(A))
    scaled = A * np.outer(s, s)
    rhs = B * (s if B.ndim == 1 else s[:, None])
    try:
        factor = scipy.linalg.cho_factor(scaled)
        x = scipy.linalg.cho_solve(factor, rhs)
    except np.linalg.LinAlgError as e:
        raise SingularSystemError(f"{context}: matrix is not positive definite ({e})") from e
    return x * (s if x.ndim == 1 else s[:, None])
