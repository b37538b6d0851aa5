"""
Functional data sets: curves held as basis coefficients plus responses
"""

from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from fda.basis import BasisSystem
from utils.errors import FuncBoostError

RESPONSE_KINDS = ("none", "scalar", "label", "functional")


def _frozen(values: Optional[np.ndarray]) -> Optional[np.ndarray]:
    if values is None:
        return None
    values = np.array(values, dtype=float)
    values.flags.writeable = False
    return values


@dataclass(frozen=True, eq=False)
class FunctionalDataSet:
    """n curves as an n x K coefficient matrix over a shared basis.

    response_kind is one of "none", "scalar", "label" (values in {-1, +1})
    or "functional" (an n x K2 coefficient matrix over response_basis).
    mean_curve / mean_response are set once the set has been centered.
    """

    basis: BasisSystem
    coefficients: np.ndarray
    response: Optional[np.ndarray] = None
    response_kind: str = "none"
    response_basis: Optional[BasisSystem] = None
    mean_curve: Optional[np.ndarray] = None
    mean_response: Optional[Union[float, np.ndarray]] = None

    def __post_init__(self):
        C = np.atleast_2d(np.asarray(self.coefficients, dtype=float))
        if C.shape[0] < 1:
            raise FuncBoostError("a functional data set needs at least one curve")
        if C.shape[1] != self.basis.n_basis:
            raise FuncBoostError(
                f"coefficient matrix has {C.shape[1]} columns but the basis has {self.basis.n_basis} functions"
            )
        if not np.all(np.isfinite(C)):
            raise FuncBoostError("coefficient matrix contains non-finite entries")
        object.__setattr__(self, "coefficients", _frozen(C))
        object.__setattr__(self, "mean_curve", _frozen(self.mean_curve))

        kind = self.response_kind
        if self.response is not None and kind == "none":
            kind = "scalar"
        if kind not in RESPONSE_KINDS:
            raise FuncBoostError(f"unknown response kind '{kind}'")
        object.__setattr__(self, "response_kind", kind)

        if kind == "none":
            if self.response is not None:
                raise FuncBoostError("response given for a data set without response")
            return
        if self.response is None:
            raise FuncBoostError(f"response kind '{kind}' requires a response")

        y = np.asarray(self.response, dtype=float)
        if kind == "functional":
            y = np.atleast_2d(y)
            if self.response_basis is None or y.shape[1] != self.response_basis.n_basis:
                raise FuncBoostError("functional response needs a matching response basis")
        elif y.ndim != 1:
            raise FuncBoostError("scalar and label responses must be vectors")
        if y.shape[0] != C.shape[0]:
            raise FuncBoostError(f"response length {y.shape[0]} does not match {C.shape[0]} curves")
        if not np.all(np.isfinite(y)):
            raise FuncBoostError("response contains non-finite entries")
        if kind == "label":
            bad = np.flatnonzero((y != 1.0) & (y != -1.0))
            if bad.size:
                raise FuncBoostError(f"labels must be -1 or +1; curve {bad[0]} has {y[bad[0]]}")
        object.__setattr__(self, "response", _frozen(y))

    @property
    def n(self) -> int:
        return self.coefficients.shape[0]

    @property
    def is_classification(self) -> bool:
        return self.response_kind == "label"

    def subset(self, indices: Sequence[int]) -> "FunctionalDataSet":
        """Data set restricted to the given curves"""
        indices = np.asarray(indices, dtype=int)
        response = None if self.response is None else self.response[indices]
        return replace(self, coefficients=self.coefficients[indices], response=response,
                       mean_curve=None, mean_response=None)


def center(dataset: FunctionalDataSet) -> Tuple[FunctionalDataSet, np.ndarray, Optional[Union[float, np.ndarray]]]:
    """Subtract column means of C (and the response mean for scalar/functional responses).

    Labels are never centered. Returns the centered set, the mean curve
    coefficients and the mean response (None for labels or no response).
    """
    C = dataset.coefficients
    mean_curve = C.mean(axis=0)
    centered_C = C - mean_curve

    mean_response = None
    response = dataset.response
    if dataset.response_kind == "scalar":
        mean_response = float(response.mean())
        response = response - mean_response
    elif dataset.response_kind == "functional":
        mean_response = response.mean(axis=0)
        response = response - mean_response

    # Accumulate with any earlier centering so intercepts stay recoverable
    total_curve = mean_curve if dataset.mean_curve is None else dataset.mean_curve + mean_curve
    total_response = mean_response
    if mean_response is not None and dataset.mean_response is not None:
        total_response = dataset.mean_response + mean_response

    centered = replace(dataset, coefficients=centered_C, response=response,
                       mean_curve=total_curve, mean_response=total_response)
    return centered, mean_curve, mean_response
