import math

import numpy as np
import pytest

from qdiscord.states import validate

BELL = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)


def x_example(corner=0.2795):
    m = np.diag([0.7, 0.0, 0.15, 0.15]).astype(complex)
    m[0, 3] = m[3, 0] = corner
    return m


@pytest.fixture
def bell():
    return validate(np.outer(BELL, BELL.conj()))


@pytest.fixture
def x_state():
    return validate(x_example())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def close(a, b, tol):
    return np.abs(np.asarray(a) - np.asarray(b)).max() < tol
