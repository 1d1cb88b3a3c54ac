"""Three-state Hamiltonian family and its control-manifold coordinates.

Basis order per qubit is ``(|2>, |0>, |1>)``: the auxiliary level first, then
the two degenerate qubit states. Two-qubit operators use the tensor order with
qubit ``a`` as the major index.

A one-qubit point is the 4-vector ``(theta1, theta2, phi1, phi2)``; a two-qubit
point is the 9-vector ``(a-point, b-point, xi)``.
"""
from __future__ import annotations

import enum

import numpy as np

from .matcore import kron

ONE_QUBIT_COORDS = ("theta1", "theta2", "phi1", "phi2")
TWO_QUBIT_COORDS = tuple(f"{c}_a" for c in ONE_QUBIT_COORDS) + tuple(
    f"{c}_b" for c in ONE_QUBIT_COORDS
) + ("xi",)

# Positions of |0>,|1> inside the 3-level space, and of |ab> inside 9 levels.
QUBIT_LEVELS = (1, 2)
TWO_QUBIT_LEVELS = (4, 5, 7, 8)
_LEVEL_11 = 8


class System(str, enum.Enum):
    ONE = "one-qubit"
    TWO = "two-qubit"

    @property
    def dim(self) -> int:
        """Number of control coordinates per point."""
        return 4 if self is System.ONE else 9

    @property
    def gate_dim(self) -> int:
        return 2 if self is System.ONE else 4

    @property
    def coords(self) -> tuple[str, ...]:
        return ONE_QUBIT_COORDS if self is System.ONE else TWO_QUBIT_COORDS

    @classmethod
    def parse(cls, value) -> "System":
        if isinstance(value, System):
            return value
        aliases = {"one": cls.ONE, "1": cls.ONE, "two": cls.TWO, "2": cls.TWO}
        key = str(value).strip().lower()
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown system {value!r}; use 'one-qubit' or 'two-qubit'") from None


def as_point(p, system: System) -> np.ndarray:
    x = np.asarray(p, dtype=float)
    if x.shape != (system.dim,):
        raise ValueError(f"{system.value} point needs {system.dim} coordinates, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("point has non-finite coordinates")
    return x


def givens_frame(p) -> np.ndarray:
    """Frame ``W = U1 U2`` of the Givens decomposition with the gauge angles set to zero."""
    t1, t2, f1, f2 = as_point(p, System.ONE)
    c1, s1, c2, s2 = np.cos(t1), np.sin(t1), np.cos(t2), np.sin(t2)
    u1 = np.array(
        [[c1, np.exp(-1j * f1) * s1, 0], [-np.exp(1j * f1) * s1, c1, 0], [0, 0, 1]],
        dtype=np.complex128,
    )
    u2 = np.array(
        [[c2, 0, np.exp(-1j * f2) * s2], [0, 1, 0], [-np.exp(1j * f2) * s2, 0, c2]],
        dtype=np.complex128,
    )
    return u1 @ u2


def entangler(xi: float) -> np.ndarray:
    """``W_xi = exp(i xi |11><11|)`` on the 9-level two-qubit space."""
    w = np.eye(9, dtype=np.complex128)
    w[_LEVEL_11, _LEVEL_11] = np.exp(1j * xi)
    return w


def two_qubit_frame(p) -> np.ndarray:
    """``W_xi (W^a (x) W^b)`` for a two-qubit point."""
    x = as_point(p, System.TWO)
    return entangler(x[8]) @ kron(givens_frame(x[:4]), givens_frame(x[4:8]))


def frame(system, p) -> np.ndarray:
    system = System.parse(system)
    return givens_frame(p) if system is System.ONE else two_qubit_frame(p)


def reference_hamiltonian(eps: float = 1.0) -> np.ndarray:
    if not eps > 0:
        raise ValueError("model energy must be positive")
    return np.diag([eps, 0.0, 0.0]).astype(np.complex128)


def hamiltonian_one(p, eps: float = 1.0) -> np.ndarray:
    w = givens_frame(p)
    return w @ reference_hamiltonian(eps) @ w.conj().T


def _kron_sum(ha: np.ndarray, hb: np.ndarray) -> np.ndarray:
    eye = np.eye(3)
    return kron(ha, eye) + kron(eye, hb)


def hamiltonian_two(p, eps: float = 1.0) -> np.ndarray:
    """Two-qubit Hamiltonian by direct conjugation of the kron-sum with ``W_xi``."""
    x = as_point(p, System.TWO)
    w = entangler(x[8])
    h = _kron_sum(hamiltonian_one(x[:4], eps), hamiltonian_one(x[4:8], eps))
    return w @ h @ w.conj().T


# Entry table of the two-qubit Hamiltonian: each cell is a sum of one-qubit
# entries ("aIJ" -> h^a_IJ, "bIJ" -> h^b_IJ, 1-based) or "0". Row/column 9 is
# the |11> level, which picks up exp(+i xi) in its row and exp(-i xi) in its
# column. Cell (3,9) reads a13 (the kron-sum gives h^a_13 there).
_PATTERN = (
    "a11+b11 b12 b13 a12 0 0 a13 0 0",
    "b21 a11+b22 b23 0 a12 0 0 a13 0",
    "b31 b32 a11+b33 0 0 a12 0 0 a13",
    "a21 0 0 a22+b11 b12 b13 a23 0 0",
    "0 a21 0 b21 a22+b22 b23 0 a23 0",
    "0 0 a21 b31 b32 a22+b33 0 0 a23",
    "a31 0 0 a32 0 0 a33+b11 b12 b13",
    "0 a31 0 0 a32 0 b21 a33+b22 b23",
    "0 0 a31 0 0 a32 b31 b32 a33+b33",
)


def hamiltonian_two_pattern(p, eps: float = 1.0) -> np.ndarray:
    """Two-qubit Hamiltonian assembled cell by cell from the explicit entry table.

    Independent of :func:`hamiltonian_two`; the two must agree elementwise.
    """
    x = as_point(p, System.TWO)
    ha = hamiltonian_one(x[:4], eps)
    hb = hamiltonian_one(x[4:8], eps)
    out = np.zeros((9, 9), dtype=np.complex128)
    for r, row in enumerate(_PATTERN):
        for c, cell in enumerate(row.split()):
            val = 0j
            if cell != "0":
                for term in cell.split("+"):
                    src = ha if term[0] == "a" else hb
                    val += src[int(term[1]) - 1, int(term[2]) - 1]
            if r == 8 and c != 8:
                val *= np.exp(1j * x[8])
            elif c == 8 and r != 8:
                val *= np.exp(-1j * x[8])
            out[r, c] = val
    return out


def cp2_from_inhomogeneous(xi1: complex, xi2: complex) -> np.ndarray:
    """Angles ``(theta1, theta2, phi1, phi2)`` of the chart point ``[1 : xi1 : xi2]``.

    ``theta_k = arctan|xi_k|`` lies in ``[0, pi/2)`` and ``phi_k = arg xi_k`` in ``(-pi, pi]``.
    """
    z = (complex(xi1), complex(xi2))
    thetas = [float(np.arctan(abs(v))) for v in z]
    phis = [float(np.angle(v)) if v != 0 else 0.0 for v in z]
    # np.angle returns -pi for negative reals with a -0.0 imaginary part
    phis = [np.pi if f == -np.pi else f for f in phis]
    return np.array([thetas[0], thetas[1], phis[0], phis[1]])
