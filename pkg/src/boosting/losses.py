"""
Loss functions driving the gradient-type boosting engines
"""

from abc import ABC, abstractmethod

import numpy as np
from scipy.special import expit

from utils.errors import BoostingError


class LossFunction(ABC):
    """Pointwise loss L(y, f) with its negative derivative in f"""

    kind: str = ""

    @abstractmethod
    def value(self, y: np.ndarray, f: np.ndarray) -> np.ndarray:
        """Elementwise loss"""

    @abstractmethod
    def negative_gradient(self, y: np.ndarray, f: np.ndarray) -> np.ndarray:
        """Elementwise -dL/df"""

    def risk(self, y: np.ndarray, f: np.ndarray) -> float:
        """Mean loss over the sample"""
        return float(np.mean(self.value(y, f)))

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


class QuadraticLoss(LossFunction):
    """L = (y - f)^2 / 2; the negative gradient is the residual"""

    kind = "quadratic"

    def value(self, y, f):
        return 0.5 * (np.asarray(y, dtype=float) - np.asarray(f, dtype=float)) ** 2

    def negative_gradient(self, y, f):
        return np.asarray(y, dtype=float) - np.asarray(f, dtype=float)


class LogisticLoss(LossFunction):
    """L = log(1 + exp(-y f)) for labels y in {-1, +1}"""

    kind = "logistic"

    def value(self, y, f):
        margin = np.asarray(y, dtype=float) * np.asarray(f, dtype=float)
        return np.logaddexp(0.0, -margin)

    def negative_gradient(self, y, f):
        y = np.asarray(y, dtype=float)
        # -dL/df = y / (1 + exp(y f)), stable for large |f|
        return y * expit(-y * np.asarray(f, dtype=float))


LOSSES = {
    "quadratic": QuadraticLoss,
    "logistic": LogisticLoss,
}


def get_loss(kind: str) -> LossFunction:
    """Loss instance for a kind name"""
    try:
        return LOSSES[kind]()
    except KeyError:
        raise BoostingError(f"unknown loss '{kind}' (choose from {', '.join(LOSSES)})") from None


def negative_gradient(loss, y: np.ndarray, f: np.ndarray) -> np.ndarray:
    """-dL/df at f for a loss instance or kind name"""
    if isinstance(loss, str):
        loss = get_loss(loss)
    y = np.asarray(y, dtype=float)
    f = np.asarray(f, dtype=float)
    if y.shape != f.shape:
        raise BoostingError(f"responses of shape {y.shape} and scores of shape {f.shape} differ")
    return loss.negative_gradient(y, f)
