"""Target gates and the closed-form loops that realize some of them."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .holonomy import concat
from .loops import PolygonalLoop, make_loop
from .matcore import MatrixError, as_matrix, kron, unitarity_defect
from .model import System

HALF_PI = np.pi / 2

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
I2 = np.eye(2, dtype=np.complex128)

CUSTOM_UNITARY_TOL = 1e-10

# name -> (system, number of float parameters)
GATES = {
    "identity": (None, 0),
    "hadamard": (System.ONE, 0),
    "pi8": (System.ONE, 0),
    "phase": (System.ONE, 1),
    "yrot": (System.ONE, 1),
    "zrot": (System.ONE, 1),
    "su2": (System.ONE, 4),
    "cnot": (System.TWO, 0),
    "swap": (System.TWO, 0),
    "cphase": (System.TWO, 1),
    "qft2": (System.TWO, 0),
}

GATE_HELP = {
    "identity": "identity on the chosen system",
    "hadamard": "(1/sqrt2)[[1,1],[1,-1]]",
    "pi8": "diag(1, exp(i pi/8))",
    "phase:d": "global phase exp(i d) I",
    "yrot:b": "exp(i b sigma_y)",
    "zrot:a": "exp(i a sigma_z)",
    "su2:d,a,b,c": "exp(i d) exp(i a sz) exp(i b sy) exp(i c sz)",
    "cnot": "controlled-NOT, control on qubit a",
    "swap": "SWAP",
    "cphase:t": "exp(i t |11><11|)",
    "qft2": "two-qubit DFT, omega = i, no bit reversal",
}


@dataclass(frozen=True)
class GateSpec:
    name: str
    params: tuple[float, ...] = ()
    system: System = System.ONE
    matrix: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.name == "custom":
            if self.matrix is None:
                raise ValueError("custom gate needs a matrix")
            m = as_matrix(self.matrix, self.system.gate_dim)
            defect = unitarity_defect(m)
            if defect > CUSTOM_UNITARY_TOL:
                raise MatrixError(f"custom gate is not unitary (defect {defect:.3e})")
            return
        if self.name not in GATES:
            raise ValueError(f"unknown gate {self.name!r}; known: {', '.join(GATES)}")
        fixed, nparams = GATES[self.name]
        if fixed is not None and fixed is not self.system:
            raise ValueError(f"gate {self.name!r} acts on {fixed.value}, not {self.system.value}")
        if len(self.params) != nparams:
            raise ValueError(f"gate {self.name!r} takes {nparams} parameter(s), got {len(self.params)}")

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}:" + ",".join(repr(float(p)) for p in self.params)


def parse_gate(text: str, system=None) -> GateSpec:
    """Parse ``name`` or ``name:p1,p2,...``; parameters accept ``pi`` expressions like ``pi/7``."""
    name, _, rest = text.strip().partition(":")
    name = name.strip().lower()
    params = tuple(_parse_angle(p) for p in rest.split(",")) if rest.strip() else ()
    if name in GATES and GATES[name][0] is not None:
        sys_ = GATES[name][0]
        if system is not None and System.parse(system) is not sys_:
            raise ValueError(f"gate {name!r} acts on {sys_.value}")
    else:
        sys_ = System.parse(system) if system is not None else System.ONE
    return GateSpec(name, params, sys_)


def _parse_angle(token: str) -> float:
    t = token.strip().lower().replace(" ", "")
    if not t:
        raise ValueError("empty gate parameter")
    sign = -1.0 if t.startswith("-") else 1.0
    t = t.lstrip("+-")
    num, _, den = t.partition("/")
    if "pi" in num:
        coef = num.replace("*", "").replace("pi", "")
        value = (float(coef) if coef else 1.0) * np.pi
    else:
        value = float(num)
    if den:
        value /= float(den)
    return sign * value


def custom_gate(matrix, system=None) -> GateSpec:
    m = np.asarray(matrix, dtype=np.complex128)
    if system is None:
        system = System.ONE if m.shape == (2, 2) else System.TWO
    return GateSpec("custom", (), System.parse(system), m)


def read_matrix_file(path) -> np.ndarray:
    """Read a square matrix stored as whitespace-separated ``re im`` pairs, row-major.

    One matrix row per line is conventional but not required; ``#`` starts a comment.
    """
    values = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            values.extend(float(tok) for tok in line.replace(",", " ").split())
        except ValueError:
            raise ValueError(f"{path}: line {lineno}: expected real numbers") from None
    if len(values) % 2:
        raise ValueError(f"{path}: odd number of values; entries are re/im pairs")
    z = np.array(values[0::2]) + 1j * np.array(values[1::2])
    n = int(round(np.sqrt(z.size)))
    if n * n != z.size or n not in (2, 4):
        raise ValueError(f"{path}: {z.size} entries do not form a 2x2 or 4x4 matrix")
    return z.reshape(n, n)


def _expi(gen: np.ndarray, angle: float) -> np.ndarray:
    # exp(i angle P) for an involutory Pauli P
    return np.cos(angle) * np.eye(len(gen)) + 1j * np.sin(angle) * gen


def gate_matrix(spec: GateSpec) -> np.ndarray:
    name, p = spec.name, spec.params
    if name == "custom":
        return as_matrix(spec.matrix)
    if name == "identity":
        return np.eye(spec.system.gate_dim, dtype=np.complex128)
    if name == "hadamard":
        return np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
    if name == "pi8":
        return np.diag([1, np.exp(1j * np.pi / 8)])
    if name == "phase":
        return np.exp(1j * p[0]) * I2
    if name == "yrot":
        return _expi(SIGMA_Y, p[0])
    if name == "zrot":
        return _expi(SIGMA_Z, p[0])
    if name == "su2":
        d, a, b, c = p
        return np.exp(1j * d) * _expi(SIGMA_Z, a) @ _expi(SIGMA_Y, b) @ _expi(SIGMA_Z, c)
    if name == "cnot":
        return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128)
    if name == "swap":
        return np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128)
    if name == "cphase":
        return np.diag([1, 1, 1, np.exp(1j * p[0])])
    if name == "qft2":
        w = np.array([[1j ** (j * k) for k in range(4)] for j in range(4)])
        return w / 2
    raise ValueError(f"unknown gate {name!r}")


# -- closed-form loops ---------------------------------------------------------


def _one(**coords) -> tuple[float, ...]:
    p = dict(theta1=0.0, theta2=0.0, phi1=0.0, phi2=0.0)
    p.update(coords)
    return (p["theta1"], p["theta2"], p["phi1"], p["phi2"])


def phase_rectangle(theta: str, phi: str, angle: float) -> PolygonalLoop:
    """Rectangle ``(0,0) -> (pi/2,0) -> (pi/2,angle) -> (0,angle)`` in one (theta, phi) plane."""
    verts = [
        _one(**{theta: HALF_PI}),
        _one(**{theta: HALF_PI, phi: angle}),
        _one(**{phi: angle}),
    ]
    return make_loop(System.ONE, None, verts)


def pi8_loop() -> PolygonalLoop:
    return phase_rectangle("theta2", "phi2", np.pi / 8)


def yrot_loop(beta: float) -> PolygonalLoop:
    """Holonomy ``exp(i beta sigma_y)``: rectangle in the (theta2, theta1) plane."""
    verts = [_one(theta2=HALF_PI), _one(theta2=HALF_PI, theta1=beta), _one(theta1=beta)]
    return make_loop(System.ONE, None, verts)


def zrot_loop(alpha: float) -> PolygonalLoop:
    """Holonomy ``exp(i alpha sigma_z)``: six legs through (theta1, theta2, phi1)."""
    verts = [
        _one(theta1=HALF_PI),
        _one(theta1=HALF_PI, theta2=HALF_PI),
        _one(theta1=HALF_PI, theta2=HALF_PI, phi1=alpha),
        _one(theta1=HALF_PI, phi1=alpha),
        _one(phi1=alpha),
    ]
    return make_loop(System.ONE, None, verts)


def phase_loop(delta: float) -> PolygonalLoop:
    """Holonomy ``exp(i delta) I``: the (theta2, phi2) rectangle then the (theta1, phi1) one."""
    return concat(phase_rectangle("theta2", "phi2", delta), phase_rectangle("theta1", "phi1", delta))


def cphase_loop(theta: float) -> PolygonalLoop:
    """Holonomy ``exp(i theta |11><11|)``: rectangle in the (theta2_a, xi) plane."""
    def pt(t2a=0.0, xi=0.0):
        p = [0.0] * 9
        p[1], p[8] = t2a, xi
        return p

    return make_loop(System.TWO, None, [pt(t2a=HALF_PI), pt(t2a=HALF_PI, xi=theta), pt(xi=theta)])


def hadamard_loop(cancel_phase: bool = False) -> PolygonalLoop:
    """``zrot(pi/2)`` after ``yrot(pi/4)``, which gives ``exp(i pi/2) H``.

    With ``cancel_phase`` a ``phase(-pi/2)`` loop is appended so the holonomy is exactly H.
    """
    loop = concat(yrot_loop(np.pi / 4), zrot_loop(np.pi / 2))
    if cancel_phase:
        loop = concat(loop, phase_loop(-np.pi / 2))
    return loop


def analytic_loop(spec: GateSpec, cancel_phase: bool = False) -> PolygonalLoop:
    """Closed-form loop whose holonomy is ``gate_matrix(spec)``.

    The Hadamard route is the exception: its holonomy carries an extra
    ``exp(i pi/2)`` unless ``cancel_phase`` is set (see :func:`hadamard_loop`).
    """
    name, p = spec.name, spec.params
    if name == "identity":
        return make_loop(spec.system, None, [])
    if name == "pi8":
        return pi8_loop()
    if name == "yrot":
        return yrot_loop(p[0])
    if name == "zrot":
        return zrot_loop(p[0])
    if name == "phase":
        return phase_loop(p[0])
    if name == "cphase":
        return cphase_loop(p[0])
    if name == "hadamard":
        return hadamard_loop(cancel_phase)
    if name == "su2":
        d, a, b, c = p
        loop = concat(concat(zrot_loop(c), yrot_loop(b)), zrot_loop(a))
        return concat(loop, phase_loop(d))
    raise ValueError(f"no closed-form loop for gate {spec.label!r}")


def cnot_from_cphase() -> np.ndarray:
    """``(I (x) H) cphase(pi) (I (x) H)``."""
    ih = kron(I2, gate_matrix(GateSpec("hadamard")))
    return ih @ gate_matrix(GateSpec("cphase", (np.pi,), System.TWO)) @ ih
