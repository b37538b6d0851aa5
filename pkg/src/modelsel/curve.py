"""
Per-iteration selection curves
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from utils.errors import FuncBoostError

METRICS = ("misclassification", "mse", "df", "aic", "bic")


@dataclass(frozen=True, eq=False)
class SelectionCurve:
    """values[m - 1] is the metric after m iterations; the first minimum wins"""

    values: np.ndarray
    metric: str
    fold_values: Optional[np.ndarray] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise FuncBoostError("a selection curve needs at least one value")
        if self.metric not in METRICS:
            raise FuncBoostError(f"unknown selection metric '{self.metric}'")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def M_max(self) -> int:
        return self.values.size

    @property
    def m_opt(self) -> int:
        return int(np.argmin(self.values)) + 1

    @property
    def min_value(self) -> float:
        return float(self.values[self.m_opt - 1])

    @property
    def iterations(self) -> np.ndarray:
        return np.arange(1, self.M_max + 1)
