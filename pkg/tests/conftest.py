import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

import clifford  # noqa: E402
import hierarchy  # noqa: E402
from suites import COUNTEREXAMPLE, example_w  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def cnot():
    return clifford.get_gate("cnot")


@pytest.fixture
def hadamard():
    return clifford.get_gate("h")


@pytest.fixture
def t_gate():
    return clifford.get_gate("t")


@pytest.fixture
def example_matrix():
    return example_w()


@pytest.fixture
def counterexample():
    return COUNTEREXAMPLE.copy()


@pytest.fixture
def third_level(rng):
    return {m: hierarchy.third_level_corpus(m, 4, rng) for m in (1, 2, 3)}
