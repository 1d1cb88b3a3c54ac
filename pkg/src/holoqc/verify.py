"""Closed-form checks that any build of the package must pass."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .connection import connection_fd_oracle, connection_one, connection_two
from .gatelib import GateSpec, analytic_loop, cnot_from_cphase, gate_matrix, hadamard_loop
from .holonomy import HolonomyConfig, holonomy
from .matcore import frob_dist
from .model import System, hamiltonian_one, hamiltonian_two, hamiltonian_two_pattern


@dataclass
class Check:
    name: str
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tol)


def _loop_checks(cfg: HolonomyConfig, tol: float, rng) -> list[Check]:
    specs = [GateSpec("pi8")]
    specs += [GateSpec("yrot", (b,)) for b in rng.uniform(-np.pi, np.pi, 3)]
    specs += [GateSpec("zrot", (a,)) for a in rng.uniform(-np.pi, np.pi, 3)]
    specs += [GateSpec("phase", (d,)) for d in rng.uniform(-np.pi, np.pi, 2)]
    specs += [GateSpec("cphase", (t,), System.TWO) for t in (np.pi, *rng.uniform(-np.pi, np.pi, 2))]
    specs += [GateSpec("su2", (1.0, np.pi / 7, 1 / 3, 1.0))]
    checks = [
        Check(f"loop {s.label}", frob_dist(holonomy(analytic_loop(s), cfg=cfg), gate_matrix(s)), tol)
        for s in specs
    ]
    h = gate_matrix(GateSpec("hadamard"))
    checks.append(Check("loop hadamard composite = i H", frob_dist(holonomy(hadamard_loop(), cfg=cfg), 1j * h), tol))
    checks.append(
        Check("loop hadamard with phase(-pi/2)", frob_dist(holonomy(hadamard_loop(cancel_phase=True), cfg=cfg), h), tol)
    )
    return checks


def _connection_checks(rng, points: int) -> list[Check]:
    worst_one = worst_two = 0.0
    for _ in range(points):
        p = rng.uniform(-np.pi, np.pi, 4)
        comps = connection_one(p)
        for i in range(4):
            worst_one = max(worst_one, frob_dist(comps[i], connection_fd_oracle(System.ONE, p, i)))
        q = rng.uniform(-np.pi, np.pi, 9)
        comps = connection_two(q)
        for i in range(9):
            worst_two = max(worst_two, frob_dist(comps[i], connection_fd_oracle(System.TWO, q, i)))
    return [
        Check(f"connection one-qubit vs finite differences ({points} pts)", worst_one, 1e-6),
        Check(f"connection two-qubit vs finite differences ({points} pts)", worst_two, 1e-6),
    ]


def _spectral_checks(rng, points: int, eps: float = 1.0) -> list[Check]:
    one = np.array([0.0, 0.0, eps])
    two = np.array([0.0] * 4 + [eps] * 4 + [2 * eps])
    s1 = s2 = pattern = 0.0
    for _ in range(points):
        s1 = max(s1, np.abs(np.linalg.eigvalsh(hamiltonian_one(rng.uniform(-np.pi, np.pi, 4), eps)) - one).max())
        q = rng.uniform(-np.pi, np.pi, 9)
        h = hamiltonian_two(q, eps)
        s2 = max(s2, np.abs(np.linalg.eigvalsh(h) - two).max())
        pattern = max(pattern, np.abs(h - hamiltonian_two_pattern(q, eps)).max())
    return [
        Check("one-qubit spectrum {eps,0,0}", s1, 1e-10),
        Check("two-qubit spectrum {2eps,eps x4,0 x4}", s2, 1e-10),
        Check("two-qubit entry table vs conjugation", pattern, 1e-12),
    ]


def run_checks(steps_per_edge: int = 200, rule: str = "midpoint", seed: int = 2024, points: int = 25) -> list[Check]:
    """All checks; loop tolerances are 1e-6 for the midpoint rule and 1e-3 for left endpoints."""
    rng = np.random.default_rng(seed)
    cfg = HolonomyConfig(steps_per_edge, rule)
    tol = 1e-6 if rule == "midpoint" else 1e-3
    checks = _loop_checks(cfg, tol, rng)
    checks.append(Check("CNOT = (I x H) cphase(pi) (I x H)", frob_dist(cnot_from_cphase(), gate_matrix(GateSpec("cnot", (), System.TWO))), 1e-12))
    checks += _connection_checks(rng, points)
    checks += _spectral_checks(rng, points)
    return checks
