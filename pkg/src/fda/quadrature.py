"""
Quadrature rules for integrals over a basis domain
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from utils.errors import BasisError


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and positive weights approximating an integral over [a, b]"""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape or nodes.size == 0:
            raise BasisError("quadrature nodes and weights must be matching 1-d arrays")
        if np.any(weights <= 0):
            raise BasisError("quadrature weights must be positive")
        if np.any(np.diff(nodes) < 0):
            raise BasisError("quadrature nodes must be ascending")
        nodes.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Integrate sampled values; the first axis runs over the nodes"""
        return np.tensordot(self.weights, np.asarray(values, dtype=float), axes=(0, 0))

    def inner_products(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """Matrix of integrals of products of the columns of two evaluation matrices"""
        weighted = left * self.weights[:, None]
        return weighted.T @ right


def gauss_legendre(breaks: np.ndarray, n_nodes: int) -> QuadratureRule:
    """Composite Gauss-Legendre rule with n_nodes points on every panel between breaks.

    Exact for piecewise polynomials of degree 2 * n_nodes - 1 whose pieces
    join at the given breaks.
    """
    breaks = np.unique(np.asarray(breaks, dtype=float))
    if breaks.size < 2:
        raise BasisError("need at least two distinct breakpoints")
    if n_nodes < 1:
        raise BasisError("n_nodes must be positive")

    ref_nodes, ref_weights = leggauss(n_nodes)
    left = breaks[:-1, None]
    half = 0.5 * np.diff(breaks)[:, None]
    nodes = left + half * (ref_nodes[None, :] + 1.0)
    weights = half * ref_weights[None, :]
    return QuadratureRule(nodes.ravel(), weights.ravel())


def composite_simpson(a: float, b: float, n_intervals: int = 4096) -> QuadratureRule:
    """Composite Simpson rule on an even number of equal intervals"""
    if n_intervals < 2 or n_intervals % 2:
        raise BasisError("Simpson's rule needs an even number of intervals")
    if not a < b:
        raise BasisError(f"degenerate interval [{a}, {b}]")

    h = (b - a) / n_intervals
    nodes = np.linspace(a, b, n_intervals + 1)
    weights = np.full(n_intervals + 1, 2.0)
    weights[1::2] = 4.0
    weights[0] = weights[-1] = 1.0
    return QuadratureRule(nodes, weights * h / 3.0)


def refine(breaks: np.ndarray, n_sub: int) -> np.ndarray:
    """Split every panel between consecutive breaks into n_sub equal panels"""
    breaks = np.unique(np.asarray(breaks, dtype=float))
    if n_sub <= 1:
        return breaks
    steps = np.linspace(0.0, 1.0, n_sub + 1)[:-1]
    inner = breaks[:-1, None] + np.diff(breaks)[:, None] * steps[None, :]
    return np.append(inner.ravel(), breaks[-1])
