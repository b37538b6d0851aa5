"""
Training design shared by the boosting engines: centered scores and the resolved weak learner
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from fda.basis import BasisSystem
from fda.dataset import FunctionalDataSet, center
from fda.gram import penalty_matrix
from flm.scalar import design_scores
from learners.base import FittedBase, HatMatrixView, WeakLearnerSpec
from learners.penalized import hat_matrix, lambda_for_df
from learners.registry import fit_learner
from utils.errors import BoostingError, LearnerError
from utils.logger import get_logger

logger = get_logger("Design")


@dataclass(frozen=True, eq=False)
class TrainingDesign:
    """Centered n x K_beta scores Z and the learner settings resolved on them.

    penalty and lam are only set for the penalized learner; lam comes from
    the df target when one is given.
    """

    Z: np.ndarray
    feature_mean: np.ndarray
    data_basis: BasisSystem
    beta_basis: BasisSystem
    learner: WeakLearnerSpec
    penalty: Optional[np.ndarray] = None
    lam: Optional[float] = None

    @property
    def n(self) -> int:
        return self.Z.shape[0]

    def fit(self, u: np.ndarray, w: Optional[np.ndarray] = None, classification: bool = False,
            rows: Optional[np.ndarray] = None) -> FittedBase:
        """Fit the weak learner to targets u (optionally on a subset of rows)"""
        Z = self.Z
        if rows is not None:
            Z = Z[rows]
            u = np.asarray(u)[rows]
            w = None if w is None else np.asarray(w)[rows]
        return fit_learner(self.learner, Z, u, w, penalty=self.penalty, lam=self.lam,
                           classification=classification)

    def hat(self) -> HatMatrixView:
        """Smoother matrix of the penalized learner on the unweighted design"""
        if self.learner.kind != "penalized":
            raise LearnerError(f"the {self.learner.kind} learner is not a fixed linear smoother")
        return hat_matrix(self.Z, self.lam, self.penalty)


def prepare_design(dataset: FunctionalDataSet, learner: WeakLearnerSpec,
                   beta_basis: Optional[BasisSystem] = None
                   ) -> Tuple[TrainingDesign, Optional[Union[float, np.ndarray]]]:
    """Center the curves, project them on the beta basis and resolve the learner.

    Returns the design and the response mean (None for labels).
    """
    centered, _, mean_response = center(dataset)
    scores = design_scores(centered, beta_basis)
    feature_mean = centered.mean_curve @ scores.J

    penalty, lam = None, None
    if learner.kind == "penalized":
        penalty = np.array(penalty_matrix(scores.beta_basis, learner.penalty_order).R)
        if learner.df_target is not None:
            lam = lambda_for_df(scores.Z, penalty, learner.df_target)
        else:
            lam = float(learner.lam)
        if lam == 0:
            logger.warning("Penalized learner with lambda=0 is the unpenalized projection learner")

    design = TrainingDesign(scores.Z, feature_mean, dataset.basis, scores.beta_basis, learner, penalty, lam)
    logger.debug(f"Training design: {design.n} curves x {scores.Z.shape[1]} scores, learner {learner.kind}")
    return design, mean_response


def check_iterations(M: int) -> int:
    if int(M) != M or M < 1:
        raise BoostingError(f"number of boosting iterations must be a positive integer, got {M}")
    return int(M)


def check_labels(dataset: FunctionalDataSet, engine: str) -> np.ndarray:
    """The +/-1 label vector, or an error naming the engine"""
    if dataset.response_kind != "label":
        raise BoostingError(f"{engine} needs -1/+1 class labels, got a '{dataset.response_kind}' response")
    return np.asarray(dataset.response, dtype=float)


def run_metadata(design: TrainingDesign, M: int, **settings) -> dict:
    """Training settings stored with a fitted model"""
    metadata = {
        "M": int(M),
        "n_train": int(design.n),
        "lam": None if design.lam is None else float(design.lam),
        "penalty_order": int(design.learner.penalty_order),
    }
    metadata.update(settings)
    return metadata
