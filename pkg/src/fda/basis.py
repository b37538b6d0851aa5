"""
Basis function systems for representing curves
"""

import math
from abc import ABC, abstractmethod
from typing import Dict, Any, Optional, Sequence, Tuple

import numpy as np
from scipy.interpolate import BSpline

from fda.quadrature import QuadratureRule, gauss_legendre, refine
from utils.errors import BasisError

# Relative slack when checking that points lie inside the domain
DOMAIN_TOLERANCE = 1e-12


class BasisSystem(ABC):
    """A family psi_1..psi_K of functions on a closed interval [a, b].

    Instances are immutable. Evaluation returns a matrix with one row per
    point and one column per basis function.
    """

    kind: str = ""

    def __init__(self, n_basis: int, domain: Sequence[float]):
        """Validate the common fields"""
        if int(n_basis) != n_basis or n_basis < 1:
            raise BasisError(f"number of basis functions must be a positive integer, got {n_basis}")
        a, b = (float(v) for v in domain)
        if not (np.isfinite(a) and np.isfinite(b)) or not a < b:
            raise BasisError(f"degenerate domain [{a}, {b}]")
        self._n_basis = int(n_basis)
        self._domain = (a, b)

    @property
    def n_basis(self) -> int:
        return self._n_basis

    @property
    def domain(self) -> Tuple[float, float]:
        return self._domain

    @property
    def length(self) -> float:
        return self._domain[1] - self._domain[0]

    @property
    def max_derivative(self) -> Optional[int]:
        """Highest supported derivative order, None when unbounded"""
        return None

    @property
    def piece_degree(self) -> Optional[int]:
        """Polynomial degree between breakpoints, None for non-polynomial systems"""
        return None

    def evaluate(self, t_grid: Sequence[float], derivative: int = 0) -> np.ndarray:
        """Evaluate the basis (or a derivative) at the given points"""
        t = np.atleast_1d(np.asarray(t_grid, dtype=float))
        if t.ndim != 1:
            raise BasisError("evaluation points must form a 1-d grid")
        if np.any(~np.isfinite(t)):
            raise BasisError("evaluation points must be finite")
        self.check_derivative(derivative)

        a, b = self._domain
        slack = DOMAIN_TOLERANCE * (b - a)
        outside = (t < a - slack) | (t > b + slack)
        if np.any(outside):
            first = t[outside][0]
            raise BasisError(f"point {first} lies outside the domain [{a}, {b}]")
        t = np.clip(t, a, b)
        return self._compute_matrix(t, int(derivative))

    def check_derivative(self, derivative: int):
        """Raise BasisError unless this basis has a derivative of the given order"""
        if int(derivative) != derivative or derivative < 0:
            raise BasisError(f"derivative order must be a non-negative integer, got {derivative}")
        limit = self.max_derivative
        if limit is not None and derivative > limit:
            raise BasisError(
                f"derivative order {derivative} exceeds the smoothness of this {self.kind} basis (max {limit})"
            )

    @abstractmethod
    def _compute_matrix(self, t: np.ndarray, derivative: int) -> np.ndarray:
        """Evaluation kernel on points already known to lie in the domain"""

    def breakpoints(self) -> np.ndarray:
        """Points where the basis functions may lose smoothness"""
        return np.array(self._domain)

    @abstractmethod
    def exact_rule(self) -> QuadratureRule:
        """Quadrature rule integrating products of two basis functions exactly"""

    def closed_form_penalty(self, derivative: int) -> Optional[np.ndarray]:
        """Analytic penalty matrix when one is available"""
        return None

    @abstractmethod
    def params(self) -> Dict[str, Any]:
        """Kind-specific parameters"""

    def spec(self) -> Dict[str, Any]:
        """Plain description used for persistence and comparisons"""
        return {
            "kind": self.kind,
            "n_basis": self._n_basis,
            "domain": [self._domain[0], self._domain[1]],
            "params": self.params(),
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, BasisSystem):
            return NotImplemented
        return self.spec() == other.spec()

    def __hash__(self) -> int:
        return hash((self.kind, self._n_basis, self._domain))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n_basis={self._n_basis}, domain={self._domain})"


class FourierBasis(BasisSystem):
    """Orthonormal Fourier system with period b - a.

    Column 0 is the constant 1/sqrt(L); then sine/cosine pairs of increasing
    frequency scaled by sqrt(2/L). An even count ends on a sine.
    """

    kind = "fourier"

    def __init__(self, n_basis: int, domain: Sequence[float] = (0.0, 1.0)):
        super().__init__(n_basis, domain)

    @property
    def period(self) -> float:
        return self.length

    @property
    def max_frequency(self) -> int:
        return self.n_basis // 2

    def frequencies(self) -> np.ndarray:
        """Integer frequency of every column (0 for the constant)"""
        return (np.arange(self.n_basis) + 1) // 2

    def _compute_matrix(self, t: np.ndarray, derivative: int) -> np.ndarray:
        L = self.period
        omega = 2.0 * np.pi / L
        mat = np.zeros((t.size, self.n_basis))
        mat[:, 0] = 1.0 / np.sqrt(L) if derivative == 0 else 0.0

        if self.n_basis > 1:
            freqs = np.arange(1, self.max_frequency + 1)
            args = np.outer(t, omega * freqs)
            scale = np.sqrt(2.0 / L) * (omega * freqs) ** derivative

            # d-th derivatives cycle through sin, cos, -sin, -cos
            phase = derivative % 4
            sin_part = [np.sin, np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x)][phase](args)
            cos_part = [np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x), np.sin][phase](args)

            sin_cols = np.arange(1, self.n_basis, 2)
            cos_cols = np.arange(2, self.n_basis, 2)
            mat[:, sin_cols] = (sin_part * scale)[:, :sin_cols.size]
            mat[:, cos_cols] = (cos_part * scale)[:, :cos_cols.size]
        return mat

    def exact_rule(self) -> QuadratureRule:
        # Gauss-Legendre panels no longer than a quarter of the shortest period
        n_sub = max(1, 4 * max(1, 2 * self.max_frequency))
        return gauss_legendre(refine(self.breakpoints(), n_sub), 16)

    def closed_form_penalty(self, derivative: int) -> Optional[np.ndarray]:
        omega = 2.0 * np.pi / self.period
        freqs = self.frequencies().astype(float)
        diag = (omega * freqs) ** (2 * derivative)
        if derivative > 0:
            diag[0] = 0.0
        return np.diag(diag)

    def params(self) -> Dict[str, Any]:
        return {"period": self.period}


class PolynomialBasis(BasisSystem):
    """Monomials 1, t, ..., t^(K-1)"""

    kind = "polynomial"

    def __init__(self, n_basis: int, domain: Sequence[float] = (0.0, 1.0)):
        super().__init__(n_basis, domain)

    @property
    def piece_degree(self) -> Optional[int]:
        return self.n_basis - 1

    def _falling(self, derivative: int) -> np.ndarray:
        return np.array([float(math.perm(j, derivative)) if j >= derivative else 0.0
                         for j in range(self.n_basis)])

    def _compute_matrix(self, t: np.ndarray, derivative: int) -> np.ndarray:
        powers = np.arange(self.n_basis) - derivative
        factors = self._falling(derivative)
        mat = np.zeros((t.size, self.n_basis))
        active = powers >= 0
        mat[:, active] = factors[active] * t[:, None] ** powers[active]
        return mat

    def exact_rule(self) -> QuadratureRule:
        return gauss_legendre(self.breakpoints(), self.n_basis)

    def closed_form_penalty(self, derivative: int) -> Optional[np.ndarray]:
        a, b = self.domain
        factors = self._falling(derivative)
        K = self.n_basis
        R = np.zeros((K, K))
        for i in range(derivative, K):
            for j in range(derivative, K):
                p = i + j - 2 * derivative
                R[i, j] = factors[i] * factors[j] * (b ** (p + 1) - a ** (p + 1)) / (p + 1)
        return R

    def params(self) -> Dict[str, Any]:
        return {"degree": self.n_basis - 1}


class BSplineBasis(BasisSystem):
    """B-spline system of a given degree over a full (augmented) knot vector.

    K equals len(knots) - degree - 1. The base interval
    [knots[degree], knots[K]] must cover the domain.
    """

    kind = "bspline"

    def __init__(self, domain: Sequence[float] = (0.0, 1.0), degree: int = 3,
                 knots: Optional[Sequence[float]] = None, n_basis: Optional[int] = None):
        a, b = (float(v) for v in domain)
        if int(degree) != degree or degree < 0:
            raise BasisError(f"B-spline degree must be a non-negative integer, got {degree}")
        degree = int(degree)

        if knots is None:
            if n_basis is None:
                raise BasisError("a B-spline basis needs either a knot vector or a number of basis functions")
            if n_basis < degree + 1:
                raise BasisError(f"n_basis={n_basis} is too small for degree {degree}")
            knots = clamped_knots((a, b), degree, np.linspace(a, b, int(n_basis) - degree + 1))

        knots = np.asarray(knots, dtype=float)
        if knots.ndim != 1 or knots.size < degree + 2:
            raise BasisError(f"knot vector needs at least degree + 2 = {degree + 2} entries")
        if np.any(~np.isfinite(knots)) or np.any(np.diff(knots) < 0):
            raise BasisError("knot vector must be finite and non-decreasing")

        K = knots.size - degree - 1
        if n_basis is not None and int(n_basis) != K:
            raise BasisError(f"n_basis={n_basis} is inconsistent with {knots.size} knots of degree {degree} (K={K})")

        super().__init__(K, (a, b))
        if knots[degree] > a or knots[K] < b:
            raise BasisError(
                f"knot vector base interval [{knots[degree]}, {knots[K]}] does not span the domain [{a}, {b}]"
            )
        _, counts = np.unique(knots[degree + 1:K], return_counts=True)
        if counts.size and counts.max() > degree:
            raise BasisError("interior knots may repeat at most degree times")

        knots.flags.writeable = False
        self._degree = degree
        self._knots = knots
        self._spline = BSpline(knots, np.eye(K), degree, extrapolate=False)

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def knots(self) -> np.ndarray:
        return self._knots

    @property
    def max_derivative(self) -> Optional[int]:
        return self._degree

    @property
    def piece_degree(self) -> Optional[int]:
        return self._degree

    def _compute_matrix(self, t: np.ndarray, derivative: int) -> np.ndarray:
        spline = self._spline if derivative == 0 else self._spline.derivative(derivative)
        mat = spline(t)
        return np.nan_to_num(np.asarray(mat, dtype=float).reshape(t.size, self.n_basis), nan=0.0)

    def breakpoints(self) -> np.ndarray:
        a, b = self.domain
        inside = self._knots[(self._knots > a) & (self._knots < b)]
        return np.unique(np.concatenate([[a], inside, [b]]))

    def exact_rule(self) -> QuadratureRule:
        # Products of two degree-p pieces have degree 2p
        return gauss_legendre(self.breakpoints(), self._degree + 1)

    def params(self) -> Dict[str, Any]:
        return {"degree": self._degree, "knots": [float(k) for k in self._knots]}


def clamped_knots(domain: Sequence[float], degree: int, breaks: Sequence[float]) -> np.ndarray:
    """Augment distinct breakpoints by repeating each end degree more times"""
    a, b = (float(v) for v in domain)
    breaks = np.asarray(breaks, dtype=float)
    return np.concatenate([np.full(degree, a), breaks, np.full(degree, b)])


def build_basis(kind: str, n_basis: Optional[int] = None, domain: Sequence[float] = (0.0, 1.0),
                params: Optional[Dict[str, Any]] = None) -> BasisSystem:
    """Construct a basis system of the requested kind.

    params: fourier -> none (period is always b - a); polynomial -> none;
    bspline -> degree (default 3) and optionally knots (full vector) or
    breaks (distinct breakpoints, clamped automatically).
    """
    params = dict(params or {})
    kind = (kind or "").lower()

    if kind == "fourier":
        if n_basis is None:
            raise BasisError("fourier basis needs n_basis")
        period = params.get("period")
        if period is not None and not math.isclose(float(period), float(domain[1]) - float(domain[0]),
                                                   rel_tol=1e-12):
            raise BasisError("the Fourier period must equal the domain length")
        return FourierBasis(n_basis, domain)

    if kind in ("polynomial", "poly", "monomial"):
        if n_basis is None:
            n_basis = int(params.get("degree", 0)) + 1
        return PolynomialBasis(n_basis, domain)

    if kind == "bspline":
        degree = params.get("degree", 3)
        knots = params.get("knots")
        if knots is None and params.get("breaks") is not None:
            knots = clamped_knots(domain, int(degree), params["breaks"])
        return BSplineBasis(domain, degree=degree, knots=knots, n_basis=n_basis)

    raise BasisError(f"unknown basis kind '{kind}'")


def basis_from_spec(spec: Dict[str, Any]) -> BasisSystem:
    """Rebuild a basis from the dictionary produced by BasisSystem.spec()"""
    try:
        return build_basis(spec["kind"], spec["n_basis"], tuple(spec["domain"]), spec.get("params"))
    except KeyError as e:
        raise BasisError(f"basis description is missing field {e}") from e


def eval_basis(basis: BasisSystem, t_grid: Sequence[float], derivative_order: int = 0) -> np.ndarray:
    """Evaluation matrix Phi[j, l] = psi_l^(d)(t_j)"""
    return basis.evaluate(t_grid, derivative_order)
