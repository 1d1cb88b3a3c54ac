"""Dense complex-matrix primitives for the small matrices used in this package.

All matrices are ``numpy.complex128`` arrays (two IEEE doubles per entry).
"""
from __future__ import annotations

import numpy as np

UNITARY_TOL = 1e-12
ANTIHERMITIAN_TOL = 1e-10

# Taylor core of the scaling-and-squaring exponential: degree and the norm
# the argument is scaled below before the series is summed.
_TAYLOR_DEGREE = 12
_TAYLOR_THETA = 0.25


class MatrixError(ValueError):
    """Raised for malformed or out-of-contract matrix arguments."""


def as_matrix(a, dim: int | None = None) -> np.ndarray:
    """Return ``a`` as a finite square complex128 array, optionally of size ``dim``."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise MatrixError(f"expected a square matrix, got shape {m.shape}")
    if dim is not None and m.shape[0] != dim:
        raise MatrixError(f"expected a {dim}x{dim} matrix, got {m.shape[0]}x{m.shape[1]}")
    if not np.all(np.isfinite(m)):
        raise MatrixError("matrix has non-finite entries")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def antihermitian_defect(m: np.ndarray) -> float:
    """Frobenius norm of ``M + M^dagger``."""
    return float(np.linalg.norm(m + dagger(m)))


def unitarity_defect(u: np.ndarray) -> float:
    """Frobenius norm of ``U^dagger U - I``."""
    u = np.asarray(u, dtype=np.complex128)
    return float(np.linalg.norm(dagger(u) @ u - np.eye(u.shape[0])))


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    return unitarity_defect(u) <= tol


def _expm_2x2(m: np.ndarray) -> np.ndarray:
    # M = i*a0*I + K with K traceless anti-Hermitian, K^2 = -w^2 I.
    a0 = 0.5 * (m[0, 0] + m[1, 1])
    k = m - a0 * np.eye(2)
    w2 = (k[0, 0] * k[1, 1] - k[0, 1] * k[1, 0]).real
    w = np.sqrt(max(w2, 0.0))
    if w < 1e-4:
        # sin(w)/w series; truncation error below w^8/9! ~ 1e-37
        w2s = w * w
        sinc = 1.0 - w2s / 6.0 + w2s * w2s / 120.0 - w2s**3 / 5040.0
    else:
        sinc = np.sin(w) / w
    return np.exp(a0) * (np.cos(w) * np.eye(2) + sinc * k)


def _expm_taylor(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    norm = np.abs(m).sum(axis=0).max()
    squarings = 0
    if norm > _TAYLOR_THETA:
        squarings = int(np.ceil(np.log2(norm / _TAYLOR_THETA)))
    a = m / 2.0**squarings
    eye = np.eye(n, dtype=np.complex128)
    # Horner: I + a(I + a/2(I + a/3(...)))
    e = eye.copy()
    for j in range(_TAYLOR_DEGREE, 0, -1):
        e = eye + (a @ e) / j
    for _ in range(squarings):
        e = e @ e
    return e


def mat_exp_antihermitian(m, tol: float = ANTIHERMITIAN_TOL) -> np.ndarray:
    """Exponential of an anti-Hermitian matrix.

    2x2 inputs use the closed form ``exp(i a0) (cos w I + sin(w)/w K)``; larger
    ones use scaling and squaring around a degree-12 Taylor core.

    Raises
    ------
    MatrixError
        If ``||M + M^dagger||_F`` exceeds ``tol``; a non-skew argument means the
        connection feeding this call is wrong.
    """
    m = as_matrix(m)
    defect = antihermitian_defect(m)
    if defect > tol:
        raise MatrixError(f"matrix is not anti-Hermitian (defect {defect:.3e} > {tol:.1e})")
    if m.shape[0] == 1:
        return np.exp(m)
    if m.shape[0] == 2:
        return _expm_2x2(m)
    return _expm_taylor(m)


def frob_dist(a, b) -> float:
    """Frobenius distance ``sqrt(Tr((A-B)^dagger (A-B)))``."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise MatrixError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def kron(a, b) -> np.ndarray:
    """Tensor product with ``(A(x)B)[i*dB+k, j*dB+l] = A[i,j] B[k,l]``."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))
