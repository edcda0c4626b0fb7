"""Shared fixtures: deterministic random-instance factories.

Every fixture seeds its own generator, so the suite is reproducible
run to run without global state.
"""

from __future__ import annotations

import numpy as np
import pytest

from nlprob import (
    RandomVariable,
    SequenceModel,
    binomial_pair_model,
    credal_set_from_rows,
)


@pytest.fixture
def rng():
    return np.random.default_rng(90125)


@pytest.fixture
def make_credal(rng):
    def make(size=None, n_measures=None):
        size = int(size if size is not None else rng.integers(2, 9))
        k = int(n_measures if n_measures is not None else rng.integers(1, 7))
        rows = rng.dirichlet(np.full(size, 0.8), size=k)
        return credal_set_from_rows(rows)
    return make


@pytest.fixture
def make_variable(rng):
    def make(size, lo=-10.0, hi=10.0):
        return RandomVariable(np.asarray(rng.uniform(lo, hi, size)))
    return make


@pytest.fixture
def make_rectangular(make_credal, make_variable):
    def make(size=None, n_measures=None, n_vars=2):
        credal = make_credal(size, n_measures)
        variables = [make_variable(credal.size) for _ in range(n_vars)]
        return SequenceModel(credal, tuple(variables), "rectangular")
    return make


@pytest.fixture
def two_point_credal():
    # the running two-measure example: P1 uniform, P2 = (0.8, 0.2)
    return credal_set_from_rows([[0.5, 0.5], [0.8, 0.2]])


@pytest.fixture
def x01():
    return RandomVariable(np.array([0.0, 1.0]))


@pytest.fixture
def size3_credal():
    return credal_set_from_rows([[0.5, 0.0, 0.5], [0.0, 1.0, 0.0]])


@pytest.fixture
def x012():
    return RandomVariable(np.array([0.0, 1.0, 2.0]))


@pytest.fixture
def pair_model():
    # comonotone pair (Y, X) = (-X, X) over the p-interval {0.3, 0.7}
    return binomial_pair_model([0.3, 0.7])
