"""
Shared fixtures: src/ on the import path, seeded generators and synthetic functional data
"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "src"))

from fda.basis import FourierBasis  # noqa: E402
from fda.dataset import FunctionalDataSet  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def make_classification():
    """Two classes whose mean curves differ along the given Fourier coefficients"""

    def factory(n=40, n_basis=7, shift=3.0, spread=0.3, active=(1,), seed=0):
        gen = np.random.default_rng(seed)
        y = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
        C = spread * gen.normal(size=(n, n_basis))
        for j in active:
            C[:, j] += 0.5 * shift * y
        return FunctionalDataSet(FourierBasis(n_basis), C, y, response_kind="label")

    return factory


@pytest.fixture
def make_regression():
    """Scalar responses y = beta_0 + integral of beta * x + noise over an orthonormal basis"""

    def factory(n=60, n_basis=7, b_true=None, intercept=0.0, noise=0.5, seed=0):
        gen = np.random.default_rng(seed)
        if b_true is None:
            b_true = np.zeros(n_basis)
            b_true[[1, 3, 4]] = [1.0, -0.8, 0.6]
        C = gen.normal(size=(n, n_basis))
        y = intercept + C @ b_true + noise * gen.normal(size=n)
        return FunctionalDataSet(FourierBasis(n_basis), C, y, response_kind="scalar"), np.asarray(b_true)

    return factory
