"""
Seeded k-fold partitions, optionally stratified by class
"""

import warnings
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np
from sklearn.model_selection import KFold, StratifiedKFold

from utils.errors import FuncBoostError
from utils.logger import get_logger

logger = get_logger("Folds")


@dataclass(frozen=True, eq=False)
class FoldAssignment:
    """assignment[i] is the fold (0..K-1) holding out sample i"""

    K: int
    assignment: np.ndarray
    seed: Optional[int]
    stratified: bool = False

    def __post_init__(self):
        a = np.array(self.assignment, dtype=int)
        if a.ndim != 1 or a.size < self.K:
            raise FuncBoostError("fold assignment must be a vector with at least one sample per fold")
        if a.min() < 0 or a.max() >= self.K:
            raise FuncBoostError(f"fold indices must lie in 0..{self.K - 1}")
        a.flags.writeable = False
        object.__setattr__(self, "assignment", a)

    @property
    def n(self) -> int:
        return self.assignment.size

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.K)

    def split(self, fold: int) -> Tuple[np.ndarray, np.ndarray]:
        """(training indices, held-out indices) for one fold"""
        held_out = self.assignment == fold
        return np.flatnonzero(~held_out), np.flatnonzero(held_out)

    def __iter__(self) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
        for fold in range(self.K):
            yield self.split(fold)


def kfold(n: int, K: int, seed: Optional[int] = 1, labels: Optional[Sequence[float]] = None) -> FoldAssignment:
    """Partition 0..n-1 into K shuffled folds whose sizes differ by at most one.

    With labels the split is stratified, so every fold gets the floor or
    ceiling of its share of each class. When no class has K members the
    labels cannot be spread over the folds and a plain split is used.
    """
    if not 2 <= K <= n:
        raise FuncBoostError(f"fold count must satisfy 2 <= K <= n = {n}, got {K}")
    random_state = None if seed is None else int(seed)
    X = np.zeros((n, 1))
    stratified = labels is not None

    if stratified:
        labels = np.asarray(labels)
        if labels.shape != (n,):
            raise FuncBoostError(f"{labels.size} labels for {n} samples")
        _, counts = np.unique(labels, return_counts=True)
        if counts.max() < K:
            logger.warning(f"No class has {K} members; folds are not stratified")
            stratified = False
        elif counts.min() < K:
            logger.warning(f"The smallest class has {counts.min()} members, fewer than the {K} folds")

    if stratified:
        splitter = StratifiedKFold(n_splits=K, shuffle=True, random_state=random_state)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            splits = list(splitter.split(X, labels))
    else:
        splits = list(KFold(n_splits=K, shuffle=True, random_state=random_state).split(X))

    assignment = np.empty(n, dtype=int)
    for fold, (_, test) in enumerate(splits):
        assignment[test] = fold
    return FoldAssignment(K, assignment, seed, stratified=stratified)
