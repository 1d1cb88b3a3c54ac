"""Connection fields on the degenerate qubit subspace.

Components are stored as the overlaps ``<b| W^dagger d_i W |a>`` (anti-Hermitian)
and enter the holonomy through the step factor ``exp(-A_i dx^i)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .matcore import kron
from .model import QUBIT_LEVELS, TWO_QUBIT_LEVELS, System, as_point, frame

_I2 = np.eye(2, dtype=np.complex128)

FD_STEP_MIN = 1e-8
FD_STEP_MAX = 1e-3


def connection_one(p) -> np.ndarray:
    """The four one-qubit components, shape ``(4, 2, 2)``, order theta1, theta2, phi1, phi2."""
    t1, t2, f1, f2 = as_point(p, System.ONE)
    s1, s2 = np.sin(t1), np.sin(t2)
    e = np.exp(1j * (f2 - f1))
    sin2t1 = np.sin(2 * t1)
    out = np.zeros((4, 2, 2), dtype=np.complex128)
    out[0] = [[0, -s2 * np.conj(e)], [s2 * e, 0]]
    # out[1] (theta2) vanishes identically
    out[2] = [
        [-1j * s1**2, -0.5j * sin2t1 * s2 * np.conj(e)],
        [-0.5j * sin2t1 * s2 * e, 1j * s2**2 * s1**2],
    ]
    out[3] = [[0, 0], [0, -1j * s2**2]]
    return out


def xi_component(theta2_a: float, theta2_b: float) -> np.ndarray:
    a = np.zeros((4, 4), dtype=np.complex128)
    a[3, 3] = 1j * np.cos(theta2_a) ** 2 * np.cos(theta2_b) ** 2
    return a


def connection_two(p) -> np.ndarray:
    """The nine two-qubit components, shape ``(9, 4, 4)``, basis ``|00>,|01>,|10>,|11>``.

    Qubit-a components are ``A(a) (x) I``, qubit-b components ``I (x) A(b)``.
    """
    x = as_point(p, System.TWO)
    ca = connection_one(x[:4])
    cb = connection_one(x[4:8])
    out = np.empty((9, 4, 4), dtype=np.complex128)
    for i in range(4):
        out[i] = kron(ca[i], _I2)
        out[4 + i] = kron(_I2, cb[i])
    out[8] = xi_component(x[1], x[5])
    return out


def coordinate_index(system: System, coordinate) -> int:
    if isinstance(coordinate, (int, np.integer)):
        if not 0 <= coordinate < system.dim:
            raise ValueError(f"coordinate index {coordinate} out of range for {system.value}")
        return int(coordinate)
    try:
        return system.coords.index(coordinate)
    except ValueError:
        raise ValueError(f"unknown coordinate {coordinate!r} for {system.value}") from None


def connection_fd_oracle(system, p, coordinate, h: float = 1e-5) -> np.ndarray:
    """Central-difference connection component computed from the frame columns.

    ``<b;p| (|a;p+h e_i> - |a;p-h e_i>) / 2h`` restricted to the qubit subspace.
    """
    system = System.parse(system)
    if not FD_STEP_MIN <= h <= FD_STEP_MAX:
        raise ValueError(f"finite-difference step {h} outside [{FD_STEP_MIN}, {FD_STEP_MAX}]")
    x = as_point(p, system)
    i = coordinate_index(system, coordinate)
    levels = list(QUBIT_LEVELS if system is System.ONE else TWO_QUBIT_LEVELS)
    e = np.zeros(system.dim)
    e[i] = h
    w = frame(system, x)[:, levels]
    dw = (frame(system, x + e)[:, levels] - frame(system, x - e)[:, levels]) / (2 * h)
    return w.conj().T @ dw


@dataclass(frozen=True)
class ConnectionField:
    """A connection on one of the two systems.

    ``analytic`` marks the closed-form field, which the holonomy evaluator
    may route through the compiled kernel.
    """

    system: System
    evaluator: Callable[[np.ndarray], np.ndarray]
    analytic: bool = False

    def __call__(self, p) -> np.ndarray:
        comps = np.asarray(self.evaluator(as_point(p, self.system)))
        if comps.shape[0] != self.system.dim:
            raise ValueError(f"field returned {comps.shape[0]} components, expected {self.system.dim}")
        return comps


ANALYTIC_ONE = ConnectionField(System.ONE, connection_one, analytic=True)
ANALYTIC_TWO = ConnectionField(System.TWO, connection_two, analytic=True)


def analytic_field(system) -> ConnectionField:
    return ANALYTIC_ONE if System.parse(system) is System.ONE else ANALYTIC_TWO


def fd_field(system, h: float = 1e-5) -> ConnectionField:
    """Connection field evaluated entirely through :func:`connection_fd_oracle`."""
    system = System.parse(system)

    def evaluate(p):
        return np.stack([connection_fd_oracle(system, p, i, h) for i in range(system.dim)])

    return ConnectionField(system, evaluate)
