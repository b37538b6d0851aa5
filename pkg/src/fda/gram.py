"""
Gram, roughness-penalty and cross-Gram matrices of basis systems
"""

from dataclasses import dataclass

import numpy as np

from fda.basis import BasisSystem, FourierBasis
from fda.quadrature import QuadratureRule, gauss_legendre, refine
from utils.errors import BasisError
from utils.logger import get_logger

logger = get_logger("Gram")


def _frozen(matrix: np.ndarray) -> np.ndarray:
    matrix = np.array(matrix, dtype=float)
    matrix.flags.writeable = False
    return matrix


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """J[i, j] = integral of psi_i * psi_j over the domain"""

    J: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "J", _frozen(self.J))


@dataclass(frozen=True, eq=False)
class PenaltyMatrix:
    """R[i, j] = integral of psi_i^(k) * psi_j^(k); k = 0 gives the Gram matrix"""

    R: np.ndarray
    k: int

    def __post_init__(self):
        object.__setattr__(self, "R", _frozen(self.R))


def _symmetrize(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.T)


def _numerical_products(basis: BasisSystem, derivative: int, rule: QuadratureRule) -> np.ndarray:
    values = basis.evaluate(rule.nodes, derivative)
    return _symmetrize(rule.inner_products(values, values))


def penalty_matrix(basis: BasisSystem, k: int = 2) -> PenaltyMatrix:
    """Roughness penalty matrix for the k-th derivative"""
    basis.check_derivative(k)
    R = basis.closed_form_penalty(k)
    if R is None:
        R = _numerical_products(basis, k, basis.exact_rule())
    return PenaltyMatrix(_symmetrize(R), int(k))


def gram_matrix(basis: BasisSystem) -> GramMatrix:
    """Gram matrix of the basis"""
    return GramMatrix(penalty_matrix(basis, 0).R)


def _product_rule(left: BasisSystem, right: BasisSystem) -> QuadratureRule:
    """Composite Gauss-Legendre rule exact (or spectrally accurate) for left * right products"""
    breaks = np.unique(np.concatenate([left.breakpoints(), right.breakpoints()]))
    degrees = [left.piece_degree, right.piece_degree]
    if None not in degrees:
        return gauss_legendre(breaks, sum(degrees) // 2 + 1)

    # Trigonometric factor: panels of a quarter period at the top product frequency
    top = sum(b.max_frequency for b in (left, right) if isinstance(b, FourierBasis))
    polynomial = sum(d for d in degrees if d is not None)
    return gauss_legendre(refine(breaks, 4 * max(1, top)), max(16, polynomial // 2 + 1))


def cross_gram(left: BasisSystem, right: BasisSystem, derivative: int = 0) -> np.ndarray:
    """Matrix of integrals psi_i^(d) * phi_j^(d) between two bases on the same domain"""
    if not np.allclose(left.domain, right.domain, rtol=0, atol=1e-12 * max(1.0, left.length)):
        raise BasisError(f"bases live on different domains {left.domain} and {right.domain}")
    if left == right:
        return np.array(penalty_matrix(left, derivative).R)

    rule = _product_rule(left, right)
    logger.debug(f"Cross-Gram {left.kind}/{right.kind} on {rule.nodes.size} quadrature nodes")
    return rule.inner_products(left.evaluate(rule.nodes, derivative), right.evaluate(rule.nodes, derivative))


def integrated_squared_error(basis: BasisSystem, b_hat: np.ndarray, b_true: np.ndarray) -> float:
    """Integral of (beta_hat - beta_true)^2 for two coefficient vectors over one basis"""
    diff = np.asarray(b_hat, dtype=float) - np.asarray(b_true, dtype=float)
    return float(diff @ gram_matrix(basis).J @ diff)
