"""Holonomy of polygonal loops as an ordered product of step exponentials.

``U = exp(-A(x_n).dx_n) ... exp(-A(x_1).dx_1)``: later steps multiply from the left.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .connection import ConnectionField, analytic_field
from .loops import DEFAULT_STEPS_PER_EDGE, RULES, DiscretizedPath, PolygonalLoop, discretize
from .matcore import frob_dist, mat_exp_antihermitian


@dataclass(frozen=True)
class HolonomyConfig:
    steps_per_edge: int = DEFAULT_STEPS_PER_EDGE
    rule: str = "midpoint"

    def __post_init__(self):
        if int(self.steps_per_edge) != self.steps_per_edge or self.steps_per_edge < 1:
            raise ValueError("steps_per_edge must be a positive integer")
        if self.rule not in RULES:
            raise ValueError(f"unknown evaluation rule {self.rule!r}; choose from {RULES}")

    def refined(self, factor: int = 4) -> "HolonomyConfig":
        return HolonomyConfig(self.steps_per_edge * factor, self.rule)


DEFAULT_CONFIG = HolonomyConfig()


def path_holonomy(path: DiscretizedPath, field: ConnectionField) -> np.ndarray:
    """Generic ordered product over a discretized path for any connection field."""
    n = field.system.gate_dim
    u = np.eye(n, dtype=np.complex128)
    for x, dx in zip(path.points, path.steps):
        if not dx.any():
            continue
        gen = -np.tensordot(dx, field(x), axes=1)
        u = mat_exp_antihermitian(gen) @ u
    return u


def holonomy(loop: PolygonalLoop, field: ConnectionField | None = None, cfg: HolonomyConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Holonomy of ``loop``.

    The closed-form field goes through the selected kernel backend; any other
    field (e.g. the finite-difference one) uses :func:`path_holonomy`.
    """
    if field is None:
        field = analytic_field(loop.system)
    if field.system is not loop.system:
        raise ValueError(f"field is for {field.system.value} but loop is {loop.system.value}")
    if field.analytic:
        return _backend.polygon_holonomy(loop.points(), cfg.steps_per_edge, cfg.rule == "midpoint")
    return path_holonomy(discretize(loop, cfg.steps_per_edge, cfg.rule), field)


def concat(first: PolygonalLoop, second: PolygonalLoop) -> PolygonalLoop:
    """Traverse ``first`` then ``second``; the holonomy is ``U(second) @ U(first)``."""
    if first.system is not second.system:
        raise ValueError("cannot concatenate loops of different systems")
    if first.basepoint != second.basepoint:
        raise ValueError("cannot concatenate loops with different basepoints")
    # passing through the basepoint between the two keeps both edge sets intact
    middle = (first.basepoint,)
    return PolygonalLoop(first.system, first.basepoint, first.vertices + middle + second.vertices)


def convergence_probe(loop: PolygonalLoop, field: ConnectionField | None = None, steps=(25, 50, 100, 200, 400), rule: str = "midpoint"):
    """Frobenius distance of each resolution in ``steps`` to the finest one.

    Returns a list of ``(steps_per_edge, distance)`` pairs.
    """
    steps = [int(s) for s in steps]
    if steps != sorted(steps):
        raise ValueError("steps must be ascending")
    mats = [holonomy(loop, field, HolonomyConfig(s, rule)) for s in steps]
    return [(s, frob_dist(m, mats[-1])) for s, m in zip(steps, mats)]
