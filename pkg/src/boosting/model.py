"""
Fitted boosting models: f_M(x) = offset + sum_m alpha_m g_m(x)
"""

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, Any, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import expit

from fda.basis import BasisSystem, basis_from_spec
from fda.dataset import FunctionalDataSet
from fda.gram import cross_gram
from flm.scalar import FunctionalLinearModel
from learners.base import FittedBase, WeakLearnerSpec
from learners.registry import base_from_dict
from utils.errors import BasisError, BoostingError, DataFormatError

ALGORITHMS = ("adaboost", "l2boost", "logitboost")
OUTPUT_KINDS = ("score", "label", "probability")
PROBABILITY_CLIP = 1e-12


@dataclass(frozen=True)
class Stage:
    """One term alpha_m * g_m of the additive model"""

    alpha: float
    base: FittedBase


@dataclass(frozen=True, eq=False)
class BoostedModel:
    """Ordered stages plus everything needed to score new curves.

    New curves are mapped to design scores with the data/beta cross-Gram and
    shifted by feature_mean, the training column means of the scores.
    offset is the response mean for L2Boost regression and 0 for the
    classification engines.
    """

    algorithm: str
    loss: str
    stages: Tuple[Stage, ...]
    data_basis: BasisSystem
    beta_basis: BasisSystem
    feature_mean: np.ndarray
    learner: WeakLearnerSpec
    offset: float = 0.0
    label_map: Optional[Tuple[float, float]] = None
    training_loss: Tuple[float, ...] = ()
    stop_reason: str = "completed"
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise BoostingError(f"unknown boosting algorithm '{self.algorithm}'")
        stages = tuple(self.stages)
        if not stages:
            raise BoostingError("a boosted model needs at least one stage")
        if not all(np.isfinite(s.alpha) for s in stages):
            raise BoostingError("stage weights must be finite")
        object.__setattr__(self, "stages", stages)
        object.__setattr__(self, "training_loss", tuple(float(v) for v in self.training_loss))

        mean = np.array(self.feature_mean, dtype=float)
        if mean.shape != (self.beta_basis.n_basis,):
            raise BoostingError(f"feature means must have {self.beta_basis.n_basis} entries")
        mean.flags.writeable = False
        object.__setattr__(self, "feature_mean", mean)

    @property
    def M(self) -> int:
        return len(self.stages)

    @property
    def alphas(self) -> np.ndarray:
        return np.array([s.alpha for s in self.stages])

    @cached_property
    def cross_gram(self) -> np.ndarray:
        return cross_gram(self.data_basis, self.beta_basis)

    def _coefficients(self, curves: Union[FunctionalDataSet, np.ndarray]) -> np.ndarray:
        if isinstance(curves, FunctionalDataSet):
            if curves.basis != self.data_basis:
                raise BasisError(f"curves are expanded in {curves.basis!r}, the model expects {self.data_basis!r}")
            return curves.coefficients
        C = np.atleast_2d(np.asarray(curves, dtype=float))
        if C.shape[1] != self.data_basis.n_basis:
            raise BasisError(
                f"curves carry {C.shape[1]} coefficients but the model's data basis has "
                f"{self.data_basis.n_basis} functions"
            )
        return C

    def features(self, curves) -> np.ndarray:
        """Centered design scores of curves in the fit-time data basis"""
        return self._coefficients(curves) @ self.cross_gram - self.feature_mean

    def _check_m(self, m: Optional[int]) -> int:
        if m is None:
            return self.M
        if not 1 <= m <= self.M:
            raise BoostingError(f"truncation point {m} outside 1..{self.M}")
        return int(m)

    def staged_scores(self, curves) -> np.ndarray:
        """n x M matrix whose column m-1 holds the scores truncated at m"""
        Z = self.features(curves)
        terms = np.column_stack([s.alpha * s.base.predict(Z) for s in self.stages])
        return self.offset + np.cumsum(terms, axis=1)

    def scores(self, curves, m: Optional[int] = None) -> np.ndarray:
        m = self._check_m(m)
        Z = self.features(curves)
        f = np.full(Z.shape[0], float(self.offset))
        for stage in self.stages[:m]:
            f = f + stage.alpha * stage.base.predict(Z)
        return f

    def truncate(self, m: int) -> "BoostedModel":
        """The model made of the first m stages"""
        m = self._check_m(m)
        return replace(self, stages=self.stages[:m], training_loss=self.training_loss[:m])

    def coefficient_vector(self, m: Optional[int] = None) -> np.ndarray:
        """sum_m alpha_m b_m when every stage is linear in the scores"""
        m = self._check_m(m)
        K = self.beta_basis.n_basis
        b = np.zeros(K)
        for stage in self.stages[:m]:
            coef = stage.base.linear_coefficients(K)
            if coef is None:
                raise BoostingError(f"stage learner '{stage.base.kind}' is not linear in the scores")
            b = b + stage.alpha * coef
        return b

    def as_linear_model(self, m: Optional[int] = None) -> FunctionalLinearModel:
        """Collapse a linear boosted fit into a single functional linear model"""
        b = self.coefficient_vector(m)
        intercept = float(self.offset - self.feature_mean @ b)
        return FunctionalLinearModel(intercept, b, self.beta_basis, cross_gram=self.cross_gram)

    def beta(self, t_grid: Sequence[float], m: Optional[int] = None) -> np.ndarray:
        return self.as_linear_model(m).beta(t_grid)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "algorithm": self.algorithm,
            "loss": self.loss,
            "data_basis": self.data_basis.spec(),
            "beta_basis": self.beta_basis.spec(),
            "feature_mean": [float(v) for v in self.feature_mean],
            "offset": float(self.offset),
            "label_map": None if self.label_map is None else [float(v) for v in self.label_map],
            "learner": self.learner.to_dict(),
            "stages": [{"alpha": float(s.alpha), "base": s.base.to_dict()} for s in self.stages],
            "training_loss": list(self.training_loss),
            "stop_reason": self.stop_reason,
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BoostedModel":
        try:
            label_map = data.get("label_map")
            return cls(
                algorithm=data["algorithm"],
                loss=data["loss"],
                stages=tuple(Stage(float(s["alpha"]), base_from_dict(s["base"])) for s in data["stages"]),
                data_basis=basis_from_spec(data["data_basis"]),
                beta_basis=basis_from_spec(data["beta_basis"]),
                feature_mean=np.asarray(data["feature_mean"], dtype=float),
                learner=WeakLearnerSpec.from_dict(data["learner"]),
                offset=float(data.get("offset", 0.0)),
                label_map=None if label_map is None else tuple(float(v) for v in label_map),
                training_loss=tuple(data.get("training_loss", ())),
                stop_reason=data.get("stop_reason", "completed"),
                metadata=dict(data.get("metadata", {})),
            )
        except (KeyError, TypeError) as e:
            raise DataFormatError(f"malformed model record: {e}") from e


def predict_boosted(model: BoostedModel, curves, m_opt: Optional[int] = None,
                    output: str = "score") -> np.ndarray:
    """Scores, labels or probabilities of the model truncated at m_opt.

    label = sign(score) with sign(0) = +1, written in the model's label
    alphabet. probability = 1 / (1 + exp(-2 score)) and exists only for
    LogitBoost models, whose scores estimate half the log-odds.
    """
    if output == "prob":
        output = "probability"
    if output not in OUTPUT_KINDS:
        raise BoostingError(f"unknown output kind '{output}'")
    if output == "probability" and model.algorithm != "logitboost":
        raise BoostingError(f"probabilities are only defined for LogitBoost models, not {model.algorithm}")

    f = model.scores(curves, m_opt)
    if output == "score":
        return f
    if output == "probability":
        return np.clip(expit(2.0 * f), PROBABILITY_CLIP, 1.0 - PROBABILITY_CLIP)

    negative, positive = model.label_map or (-1.0, 1.0)
    return np.where(f >= 0, positive, negative)
