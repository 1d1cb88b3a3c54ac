import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_antihermitian
from holoqc.matcore import (
    MatrixError,
    frob_dist,
    kron,
    mat_exp_antihermitian,
    unitarity_defect,
)


def taylor_series(m, terms=50):
    # plain partial sums, no scaling: the independent oracle
    out = np.eye(len(m), dtype=complex)
    term = np.eye(len(m), dtype=complex)
    for j in range(1, terms):
        term = term @ m / j
        out = out + term
    return out


def test_exp_of_zero_is_identity():
    assert np.array_equal(mat_exp_antihermitian(np.zeros((2, 2))), np.eye(2))


def test_exp_planar_rotation():
    m = -(np.pi / 2) * np.array([[0, -1], [1, 0]])
    assert np.allclose(mat_exp_antihermitian(m), [[0, 1], [-1, 0]], atol=1e-15)


@pytest.mark.parametrize("n", [2, 3, 4, 9])
def test_exp_matches_series_oracle(rng, n):
    for _ in range(20):
        m = random_antihermitian(rng, n)
        assert np.abs(mat_exp_antihermitian(m) - taylor_series(m)).max() < 1e-10


def test_exp_rejects_non_antihermitian():
    with pytest.raises(MatrixError):
        mat_exp_antihermitian(np.eye(2))


def test_exp_tiny_2x2_uses_series_branch():
    m = 1e-7 * np.array([[0, 1], [-1, 0]], dtype=complex) + 3e-8j * np.eye(2)
    assert np.abs(mat_exp_antihermitian(m) - taylor_series(m, 10)).max() < 1e-16


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 4]), st.floats(0.01, 8.0))
def test_exp_unitary_and_inverse(seed, n, scale):
    m = random_antihermitian(np.random.default_rng(seed), n, scale)
    u = mat_exp_antihermitian(m)
    assert unitarity_defect(u) <= 1e-12
    assert np.linalg.norm(u @ mat_exp_antihermitian(-m) - np.eye(n)) <= 1e-12


def test_frob_dist_examples():
    assert frob_dist(np.eye(2), np.eye(2)) == 0
    # sqrt(2 |1 - i|^2) = 2
    assert math.isclose(frob_dist(np.eye(2), 1j * np.eye(2)), 2.0, rel_tol=1e-15)
    with pytest.raises(MatrixError):
        frob_dist(np.eye(2), np.eye(4))


def test_frob_dist_triangle_and_symmetry(rng):
    for _ in range(100):
        a, b, c = (rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)) for _ in range(3))
        assert frob_dist(a, b) == pytest.approx(frob_dist(b, a), abs=1e-15)
        assert frob_dist(a, c) <= frob_dist(a, b) + frob_dist(b, c) + 1e-12


def test_kron_examples():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(kron(np.diag([1, -1]), np.eye(2)), np.diag([1, 1, -1, -1]))
    eps = 0.7
    h = np.diag([eps, 0, 0])
    got = kron(h, np.eye(3)) + kron(np.eye(3), h)
    assert np.allclose(got, np.diag([2 * eps, eps, eps, eps, 0, 0, eps, 0, 0]))


def test_kron_entry_formula(rng):
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    k = kron(a, b)
    for i in range(3):
        for j in range(3):
            for p in range(2):
                for q in range(2):
                    assert abs(k[i * 2 + p, j * 2 + q] - a[i, j] * b[p, q]) <= 1e-15 * abs(a[i, j] * b[p, q])


def test_kron_associative_bilinear(rng):
    def rand(n):
        return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))

    a, b, c, d = rand(2), rand(2), rand(3), rand(2)
    assert np.abs(kron(kron(a, b), c) - kron(a, kron(b, c))).max() < 1e-12
    s = 0.3 - 1.2j
    assert np.abs(kron(a + s * d, b) - (kron(a, b) + s * kron(d, b))).max() < 1e-12
    assert np.abs(kron(b, a + s * d) - (kron(b, a) + s * kron(b, d))).max() < 1e-12
