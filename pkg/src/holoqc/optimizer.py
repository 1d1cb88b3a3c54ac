"""Loop synthesis: minimize ``||U_target - U(loop)||_F`` over k-vertex polygons."""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _backend
from .gatelib import GateSpec, gate_matrix
from .loops import DEFAULT_STEPS_PER_EDGE, RULES, PolygonalLoop, loop_from_flat
from .matcore import as_matrix, frob_dist
from .model import System

STANDARD_COEFFICIENTS = (1.0, 2.0, 0.5, 0.5)


def adaptive_coefficients(n: int) -> tuple[float, float, float, float]:
    """Dimension-dependent reflection/expansion/contraction/shrink (Gao and Han, 2012)."""
    return (1.0, 1.0 + 2.0 / n, 0.75 - 1.0 / (2.0 * n), 1.0 - 1.0 / n)


@dataclass
class NelderMeadResult:
    x: np.ndarray
    fun: float
    nit: int
    nfev: int
    reason: str


def nelder_mead(
    f: Callable[[np.ndarray], float],
    x0,
    *,
    step: float = 0.1,
    coefficients: tuple[float, float, float, float] | None = None,
    adaptive: bool = False,
    max_iter: int = 10_000,
    xatol: float = 1e-12,
    fatol: float = 1e-15,
    target_f: float | None = None,
) -> NelderMeadResult:
    """Minimize ``f`` with the Nelder-Mead polytope method.

    The initial simplex is ``x0`` plus ``step`` along each axis. Stops when the
    simplex diameter drops below ``xatol``, the spread of values below
    ``fatol``, the best value reaches ``target_f``, or after ``max_iter``
    iterations; ``reason`` says which.
    """
    x0 = np.asarray(x0, dtype=float)
    if not np.all(np.isfinite(x0)):
        raise ValueError("x0 must be finite")
    n = x0.size
    if coefficients is None:
        coefficients = adaptive_coefficients(n) if adaptive and n > 1 else STANDARD_COEFFICIENTS
    rho, chi, psi, sigma = coefficients

    sim = np.empty((n + 1, n))
    sim[0] = x0
    sim[1:] = x0 + step * np.eye(n)
    fs = np.array([f(x) for x in sim])
    nfev = n + 1
    nit = 0
    reason = "max_iter"
    while True:
        order = np.argsort(fs, kind="stable")
        sim, fs = sim[order], fs[order]
        if target_f is not None and fs[0] <= target_f:
            reason = "target"
            break
        if np.max(np.abs(sim[1:] - sim[0])) < xatol:
            reason = "xatol"
            break
        if fs[-1] - fs[0] < fatol:
            reason = "fatol"
            break
        if nit >= max_iter:
            break
        nit += 1

        centroid = sim[:-1].mean(axis=0)
        worst = sim[-1]
        xr = centroid + rho * (centroid - worst)
        fr = f(xr)
        nfev += 1
        if fr < fs[0]:
            xe = centroid + rho * chi * (centroid - worst)
            fe = f(xe)
            nfev += 1
            if fe < fr:
                sim[-1], fs[-1] = xe, fe
            else:
                sim[-1], fs[-1] = xr, fr
            continue
        if fr < fs[-2]:
            sim[-1], fs[-1] = xr, fr
            continue
        if fr < fs[-1]:
            xc = centroid + psi * rho * (centroid - worst)
            fc = f(xc)
            nfev += 1
            if fc <= fr:
                sim[-1], fs[-1] = xc, fc
                continue
        else:
            xc = centroid - psi * (centroid - worst)
            fc = f(xc)
            nfev += 1
            if fc < fs[-1]:
                sim[-1], fs[-1] = xc, fc
                continue
        sim[1:] = sim[0] + sigma * (sim[1:] - sim[0])
        fs[1:] = [f(x) for x in sim[1:]]
        nfev += n
    return NelderMeadResult(sim[0].copy(), float(fs[0]), nit, nfev, reason)


# -- objective -----------------------------------------------------------------


def _closed_points(x: np.ndarray, k: int, system: System, basepoint) -> np.ndarray:
    pts = np.empty((k + 2, system.dim))
    pts[0] = pts[-1] = 0.0 if basepoint is None else basepoint
    pts[1:-1] = x.reshape(k, system.dim)
    return pts


def make_objective(target, system, k: int, steps_per_edge: int = DEFAULT_STEPS_PER_EDGE, rule: str = "midpoint", basepoint=None):
    """Closure ``x -> ||target - U(x)||_F`` for flattened vertex vectors of length ``k * dim``.

    Each closure owns its vertex buffer, so separate closures can run in parallel.
    """
    system = System.parse(system)
    if k < 1:
        raise ValueError("k must be >= 1")
    if rule not in RULES:
        raise ValueError(f"unknown evaluation rule {rule!r}")
    target = as_matrix(target, system.gate_dim)
    n = k * system.dim
    pts = _closed_points(np.zeros(n), k, system, basepoint)
    midpoint = rule == "midpoint"
    kernel = _backend.polygon_holonomy

    def f(x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (n,):
            raise ValueError(f"expected a vector of length {n} (k={k}, {system.value}), got shape {x.shape}")
        pts[1:-1] = x.reshape(k, system.dim)
        d = target - kernel(pts, steps_per_edge, midpoint)
        return float(np.sqrt(np.sum(d.real**2 + d.imag**2)))

    return f


def objective(x, target, system, steps_per_edge: int = DEFAULT_STEPS_PER_EDGE, rule: str = "midpoint", basepoint=None) -> float:
    """``f = ||target - U||_F`` for the loop whose free vertices are the flattened ``x``."""
    system = System.parse(system)
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0 or x.size % system.dim:
        raise ValueError(f"vector length {x.size} is not a positive multiple of {system.dim}")
    return make_objective(target, system, x.size // system.dim, steps_per_edge, rule, basepoint)(x)


# -- synthesis -------------------------------------------------------------------


@dataclass(frozen=True)
class SynthesisConfig:
    """Settings of a multi-start synthesis run.

    ``max_restarts`` defaults to 100 for one-qubit and 400 for two-qubit
    targets. ``adaptive`` selects dimension-dependent Nelder-Mead
    coefficients; ``None`` turns them on for 20 or more free coordinates.
    Restarts are drawn in rounds of ``batch_size``; ``workers`` only sets how
    many of a round run at once and never changes the result.

    A start that reaches ``target_f`` is accepted only if its objective at
    ``refine_factor`` times the resolution differs by at most
    ``max_refinement_gap``; otherwise the search goes on. ``None`` disables
    the check.
    """

    k: int = 3
    system: System = System.ONE
    steps_per_edge: int = DEFAULT_STEPS_PER_EDGE
    rule: str = "midpoint"
    target_f: float = 1e-8
    max_restarts: int | None = None
    max_iterations_per_start: int = 200_000
    seed: int = 0
    init_range: float = np.pi
    nm_coefficients: tuple[float, float, float, float] | None = None
    adaptive: bool | None = None
    initial_step: float = 0.1
    batch_size: int = 1
    workers: int = 1
    refine_factor: int = 4
    max_refinement_gap: float | None = 1e-4

    def __post_init__(self):
        object.__setattr__(self, "system", System.parse(self.system))
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not self.target_f > 0:
            raise ValueError("target_f must be positive")
        if self.steps_per_edge < 1:
            raise ValueError("steps_per_edge must be >= 1")
        if self.rule not in RULES:
            raise ValueError(f"unknown evaluation rule {self.rule!r}")
        if self.max_restarts is not None and self.max_restarts < 1:
            raise ValueError("max_restarts must be >= 1")
        if self.batch_size < 1 or self.workers < 1:
            raise ValueError("batch_size and workers must be >= 1")
        if self.refine_factor < 1:
            raise ValueError("refine_factor must be >= 1")
        if self.max_refinement_gap is not None and not self.max_refinement_gap >= 0:
            raise ValueError("max_refinement_gap must be non-negative")
        if self.nm_coefficients is not None and len(self.nm_coefficients) != 4:
            raise ValueError("nm_coefficients are (reflection, expansion, contraction, shrink)")

    @property
    def dimension(self) -> int:
        return self.k * self.system.dim

    @property
    def restarts(self) -> int:
        if self.max_restarts is not None:
            return self.max_restarts
        return 100 if self.system is System.ONE else 400

    @property
    def use_adaptive(self) -> bool:
        return self.dimension >= 20 if self.adaptive is None else self.adaptive


@dataclass
class StartOutcome:
    index: int
    x: np.ndarray
    fun: float
    iterations: int
    evaluations: int
    refined: float | None = None

    @property
    def gap(self) -> float:
        return np.inf if self.refined is None else abs(self.refined - self.fun)


@dataclass
class SynthesisResult:
    loop: PolygonalLoop
    f_final: float
    f_refined: float
    converged: bool
    restarts_used: int
    iterations: int
    evaluations: int
    seed: int
    best_restart: int
    wall_time: float
    history: list[float] = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "converged": self.converged,
            "f_final": self.f_final,
            "f_refined": self.f_refined,
            "restarts_used": self.restarts_used,
            "best_restart": self.best_restart,
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "seed": self.seed,
            "wall_time_s": round(self.wall_time, 3),
        }


def _target_matrix(target, system: System) -> tuple[np.ndarray, str]:
    if isinstance(target, GateSpec):
        if target.system is not system:
            raise ValueError(f"gate {target.label!r} is {target.system.value}, config is {system.value}")
        return gate_matrix(target), target.label
    return as_matrix(target, system.gate_dim), "custom"


def start_point(cfg: SynthesisConfig, index: int) -> np.ndarray:
    """Initial vertex vector of restart ``index``: uniform in ``[-init_range, init_range]``."""
    rng = np.random.default_rng([cfg.seed & 0xFFFFFFFFFFFFFFFF, index])
    return rng.uniform(-cfg.init_range, cfg.init_range, cfg.dimension)


def run_start(target: np.ndarray, cfg: SynthesisConfig, index: int) -> StartOutcome:
    """One independent start: Nelder-Mead rounds re-seeded at the best vertex set.

    A round that improves the value by less than half (while still above
    1e-3) ends the start; small values keep polishing until the iteration
    budget is spent.
    """
    f = make_objective(target, cfg.system, cfg.k, cfg.steps_per_edge, cfg.rule)
    x = start_point(cfg, index)
    budget = cfg.max_iterations_per_start
    iterations = evaluations = 0
    best = np.inf
    while budget > 0:
        res = nelder_mead(
            f,
            x,
            step=cfg.initial_step,
            coefficients=cfg.nm_coefficients,
            adaptive=cfg.use_adaptive,
            max_iter=budget,
            target_f=cfg.target_f,
        )
        iterations += res.nit
        evaluations += res.nfev
        budget -= max(res.nit, 1)
        stalled = res.fun > 0.5 * best and res.fun > 1e-3
        if res.fun < best:
            best, x = res.fun, res.x
        if res.reason == "target" or stalled or res.fun >= best and res.reason != "max_iter" and res.fun > 1e-3:
            break
    refined = None
    if best <= cfg.target_f:
        refined = make_objective(target, cfg.system, cfg.k, cfg.steps_per_edge * cfg.refine_factor, cfg.rule)(x)
    return StartOutcome(index, x, best, iterations, evaluations, refined)


def _accepted(out: StartOutcome, cfg: SynthesisConfig) -> bool:
    if out.fun > cfg.target_f:
        return False
    return cfg.max_refinement_gap is None or out.gap <= cfg.max_refinement_gap


def synthesize(target, cfg: SynthesisConfig, progress: Callable[[StartOutcome], None] | None = None) -> SynthesisResult:
    """Multi-start search for a k-vertex loop whose holonomy equals ``target``.

    ``target`` is a :class:`GateSpec` or a unitary matrix. Runs restarts until one
    is accepted (see :class:`SynthesisConfig`) or the restart budget is
    exhausted; non-convergence is reported through ``converged`` rather than
    raised. The reported start is the accepted one with the smallest value,
    ties going to the lower index, or the overall best if none was accepted.
    """
    t0 = time.perf_counter()
    matrix, label = _target_matrix(target, cfg.system)
    best: StartOutcome | None = None
    chosen: StartOutcome | None = None
    history: list[float] = []
    iterations = evaluations = used = 0
    executor = ThreadPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        for first in range(0, cfg.restarts, cfg.batch_size):
            indices = range(first, min(first + cfg.batch_size, cfg.restarts))
            if executor is None:
                outcomes = [run_start(matrix, cfg, i) for i in indices]
            else:
                outcomes = list(executor.map(lambda i: run_start(matrix, cfg, i), indices))
            for out in outcomes:
                used += 1
                iterations += out.iterations
                evaluations += out.evaluations
                if best is None or out.fun < best.fun:
                    best = out
                if _accepted(out, cfg) and (chosen is None or out.fun < chosen.fun):
                    chosen = out
                history.append(best.fun)
                if progress is not None:
                    progress(out)
            if chosen is not None:
                break
    finally:
        if executor is not None:
            executor.shutdown()
    if chosen is not None:
        best = chosen
    loop = loop_from_flat(cfg.system, best.x)
    f_final = make_objective(matrix, cfg.system, cfg.k, cfg.steps_per_edge, cfg.rule)(best.x)
    f_refined = make_objective(matrix, cfg.system, cfg.k, cfg.steps_per_edge * cfg.refine_factor, cfg.rule)(best.x)
    converged = f_final <= cfg.target_f
    loop = loop.with_metadata(
        gate=label,
        f_final=f_final,
        f_refined=f_refined,
        seed=cfg.seed,
        k=cfg.k,
        steps_per_edge=cfg.steps_per_edge,
        rule=cfg.rule,
        converged=converged,
        restart=best.index,
    )
    return SynthesisResult(
        loop=loop,
        f_final=f_final,
        f_refined=f_refined,
        converged=converged,
        restarts_used=used,
        iterations=iterations,
        evaluations=evaluations,
        seed=cfg.seed,
        best_restart=best.index,
        wall_time=time.perf_counter() - t0,
        history=history,
    )


# -- landscape -------------------------------------------------------------------


def section_axes(x1, x2, seed: int = 0):
    """Origin and axes for a section through two minima.

    The first axis interpolates ``x1 -> x2``; the second is a seeded random
    direction orthogonal to it with the same length (unit length if the
    minima coincide).
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x1.shape != x2.shape:
        raise ValueError(f"minima have different shapes {x1.shape} and {x2.shape}")
    axis1 = x2 - x1
    r = np.random.default_rng(seed).standard_normal(x1.size)
    norm1 = np.linalg.norm(axis1)
    if norm1 > 0:
        r -= (r @ axis1) / norm1**2 * axis1
    scale = norm1 if norm1 > 0 else 1.0
    axis2 = r / np.linalg.norm(r) * scale
    return x1, axis1, axis2


def section_coordinates(grid: int, span: float = 1.0):
    """Grid values ``s`` in [0, 1] along the first axis and ``t`` (always containing 0) along the second."""
    if grid < 2:
        raise ValueError("grid must be >= 2")
    s = np.linspace(0.0, 1.0, grid)
    c = (grid - 1) // 2
    t = (np.arange(grid) - c) * (span / max(c, 1))
    return s, t


def landscape_section(target, cfg: SynthesisConfig, origin, axis1, axis2, grid: int, span: float = 1.0):
    """Objective on the plane ``origin + s axis1 + t axis2``.

    Returns ``(s, t, values)`` with ``values[i, j]`` at ``(s[i], t[j])``.
    """
    matrix, _ = _target_matrix(target, cfg.system)
    origin = np.asarray(origin, dtype=float)
    axis1 = np.asarray(axis1, dtype=float)
    axis2 = np.asarray(axis2, dtype=float)
    if not origin.shape == axis1.shape == axis2.shape == (cfg.dimension,):
        raise ValueError(f"origin and axes must have length {cfg.dimension}")
    f = make_objective(matrix, cfg.system, cfg.k, cfg.steps_per_edge, cfg.rule)
    s, t = section_coordinates(grid, span)
    values = np.array([[f(origin + si * axis1 + tj * axis2) for tj in t] for si in s])
    return s, t, values
