#!/usr/bin/env python3
"""
Example usage of FuncBoost
This shows how to use the library programmatically without the command line
"""

import sys

import numpy as np

# Add src to path
sys.path.insert(0, 'src')

from boosting.engine import EngineSpec
from boosting.model import predict_boosted
from fda.basis import FourierBasis
from fda.smoothing import smooth_curves
from learners.base import WeakLearnerSpec
from modelsel.cross_validation import cross_validate
from modelsel.folds import kfold
from utils.config import Config
from utils.logger import setup_logger


def synthetic_curves(n=100, n_points=128, seed=1):
    """Two classes of noisy curves whose low-frequency content differs"""
    rng = np.random.default_rng(seed)
    t = np.linspace(0.0, 1.0, n_points)
    y = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    amplitude = 1.0 + 0.6 * y + 0.4 * rng.normal(size=n)
    values = amplitude[:, None] * np.sin(2 * np.pi * t) + 0.3 * rng.normal(size=(n, n_points))
    return t, values, y


def main():
    setup_logger()
    config = Config()

    # Example 1: Expand sampled curves in a Fourier basis
    print("Example 1: Basis expansion")
    print("-" * 50)

    t, values, y = synthetic_curves()
    dataset = smooth_curves(t, values, FourierBasis(15), lam=1e-6, k=2, response=y, response_kind="label")
    print(f"{dataset.n} curves -> {dataset.basis.n_basis} coefficients each")

    # Example 2: Choose the number of iterations by 10-fold cross-validation
    print("\n\nExample 2: Cross-validated LogitBoost with stumps")
    print("-" * 50)

    engine = EngineSpec("logitboost", WeakLearnerSpec("stump"))
    folds = kfold(dataset.n, 10, seed=1, labels=dataset.response)
    curve = cross_validate(
        engine, dataset, folds, M_max=100,
        max_workers=config.max_workers,
        progress_callback=lambda current, total: print(f"Fold {current}/{total} done")
    )
    print(f"Minimum cv error {curve.min_value:.3f} after {curve.m_opt} iterations")

    # Example 3: Fit to the selected size and predict probabilities
    print("\n\nExample 3: Fit and predict")
    print("-" * 50)

    model = engine.fit(dataset, curve.m_opt)
    probabilities = predict_boosted(model, dataset, output="probability")
    labels = predict_boosted(model, dataset, output="label")
    print(f"Training error: {np.mean(labels != dataset.response):.3f}")
    print(f"First five probabilities: {np.round(probabilities[:5], 3)}")

    # Example 4: Boosted coefficient function of a linear learner
    print("\n\nExample 4: L2Boost with the componentwise learner")
    print("-" * 50)

    l2 = EngineSpec("l2boost", WeakLearnerSpec("componentwise"), shrinkage=0.1).fit(dataset, 50)
    grid = np.linspace(0.0, 1.0, 5)
    print(f"beta(t) on {grid}: {np.round(l2.beta(grid), 3)}")


if __name__ == "__main__":
    main()
