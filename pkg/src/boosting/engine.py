"""
One handle for "which engine, which learner, which settings"
"""

from dataclasses import dataclass
from typing import Callable, Optional

from fda.basis import BasisSystem
from fda.dataset import FunctionalDataSet
from boosting.adaboost import MODES, adaboost
from boosting.l2boost import l2boost
from boosting.logitboost import logitboost
from boosting.model import ALGORITHMS, BoostedModel
from learners.base import WeakLearnerSpec
from utils.errors import BoostingError


@dataclass(frozen=True)
class EngineSpec:
    """Boosting algorithm plus weak learner; mode/seed apply to AdaBoost, shrinkage to L2Boost"""

    algorithm: str
    learner: WeakLearnerSpec
    mode: str = "reweight"
    seed: Optional[int] = 1
    shrinkage: float = 1.0
    beta_basis: Optional[BasisSystem] = None

    def __post_init__(self):
        algorithm = self.algorithm.lower()
        if algorithm not in ALGORITHMS:
            raise BoostingError(f"unknown boosting algorithm '{self.algorithm}' (choose from {', '.join(ALGORITHMS)})")
        object.__setattr__(self, "algorithm", algorithm)
        if self.mode not in MODES:
            raise BoostingError(f"unknown AdaBoost mode '{self.mode}'")
        if not 0 < self.shrinkage <= 1:
            raise BoostingError(f"shrinkage must lie in (0, 1], got {self.shrinkage}")

    @property
    def is_classifier(self) -> bool:
        return self.algorithm != "l2boost"

    def fit(self, dataset: FunctionalDataSet, M: int,
            progress_callback: Optional[Callable[[int, int], None]] = None) -> BoostedModel:
        if self.algorithm == "adaboost":
            return adaboost(dataset, self.learner, M, self.mode, self.seed, self.beta_basis, progress_callback)
        if self.algorithm == "l2boost":
            return l2boost(dataset, self.learner, M, self.shrinkage, self.beta_basis, progress_callback)
        return logitboost(dataset, self.learner, M, self.beta_basis, progress_callback)
