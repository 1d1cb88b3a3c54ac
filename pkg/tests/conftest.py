import numpy as np
import pytest

from holoqc.fixtures import published_loop


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def published_hadamard():
    return published_loop("hadamard")


@pytest.fixture(scope="session")
def published_su2():
    return published_loop("su2")


def random_antihermitian(rng, n, scale=1.0):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (a - a.conj().T) / 2
