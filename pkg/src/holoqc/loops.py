"""Closed polygonal loops in control space, their discretization and file I/O."""
from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .model import System

FORMAT_NAME = "holoqc-loop"
FORMAT_VERSION = 1

DEFAULT_STEPS_PER_EDGE = 200
RULES = ("midpoint", "left")


class LoopFormatError(ValueError):
    """A loop file could not be parsed; the message names the line or field."""


def _coerce_point(p, system: System, what: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(v) for v in p)
    except TypeError:
        raise ValueError(f"{what}: expected a sequence of {system.dim} numbers") from None
    if len(vals) != system.dim:
        raise ValueError(f"{what}: {system.value} points have {system.dim} coordinates, got {len(vals)}")
    if not all(math.isfinite(v) for v in vals):
        raise ValueError(f"{what}: non-finite coordinate")
    return vals


@dataclass(frozen=True)
class PolygonalLoop:
    """Loop ``basepoint -> v1 -> ... -> vk -> basepoint`` along straight edges."""

    system: System
    basepoint: tuple[float, ...]
    vertices: tuple[tuple[float, ...], ...]
    metadata: dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    @property
    def k(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return self.k + 1

    def points(self) -> np.ndarray:
        """Closed vertex sequence, shape ``(k + 2, dim)``; first and last rows are the basepoint."""
        b = np.asarray(self.basepoint, dtype=float)
        rows = [b, *(np.asarray(v, dtype=float) for v in self.vertices), b]
        return np.vstack(rows)

    def flat(self) -> np.ndarray:
        """Free vertices flattened to the optimizer's vector of length ``k * dim``."""
        return np.asarray(self.vertices, dtype=float).reshape(-1)

    def with_metadata(self, **meta) -> "PolygonalLoop":
        return PolygonalLoop(self.system, self.basepoint, self.vertices, {**self.metadata, **meta})


def make_loop(system, basepoint=None, vertices: Sequence = (), metadata=None) -> PolygonalLoop:
    system = System.parse(system)
    if basepoint is None:
        basepoint = np.zeros(system.dim)
    base = _coerce_point(basepoint, system, "basepoint")
    verts = tuple(_coerce_point(v, system, f"vertex {i + 1}") for i, v in enumerate(vertices))
    return PolygonalLoop(system, base, verts, dict(metadata or {}))


def loop_from_flat(system, x, basepoint=None) -> PolygonalLoop:
    system = System.parse(system)
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size % system.dim:
        raise ValueError(f"flat vector length {x.size} is not a multiple of {system.dim}")
    return make_loop(system, basepoint, x.reshape(-1, system.dim))


def reverse(loop: PolygonalLoop) -> PolygonalLoop:
    return PolygonalLoop(loop.system, loop.basepoint, tuple(reversed(loop.vertices)), dict(loop.metadata))


@dataclass(frozen=True)
class DiscretizedPath:
    """Ordered steps of a discretized loop.

    ``points[j]`` is where the connection is evaluated for step ``j`` and
    ``steps[j]`` the coordinate increment; ``nodes`` is the subdivision lattice
    (``n + 1`` rows, vertices included).
    """

    points: np.ndarray
    steps: np.ndarray
    nodes: np.ndarray

    def __len__(self) -> int:
        return len(self.steps)


def discretize(loop: PolygonalLoop, steps_per_edge: int = DEFAULT_STEPS_PER_EDGE, rule: str = "midpoint") -> DiscretizedPath:
    if steps_per_edge < 1:
        raise ValueError("steps_per_edge must be >= 1")
    if rule not in RULES:
        raise ValueError(f"unknown evaluation rule {rule!r}; choose from {RULES}")
    pts = loop.points()
    n = int(steps_per_edge)
    offset = 0.5 if rule == "midpoint" else 0.0
    j = np.arange(n, dtype=float)[:, None]
    frac = (np.arange(n, dtype=float) / n)[:, None]
    points, steps, nodes = [], [], []
    for a, b in zip(pts[:-1], pts[1:]):
        d = (b - a) / n
        points.append(a + (j + offset) * d)
        steps.append(np.broadcast_to(d, (n, len(d))))
        nodes.append(a + frac * (b - a))
    nodes.append(pts[-1:])
    return DiscretizedPath(np.vstack(points), np.vstack(steps), np.vstack(nodes))


# -- file format -------------------------------------------------------------


def _fmt_row(values) -> str:
    return "[" + ", ".join(repr(float(v)) for v in values) + "]"


def dumps_loop(loop: PolygonalLoop) -> str:
    lines = [
        "{",
        f'  "format": "{FORMAT_NAME}",',
        f'  "version": {FORMAT_VERSION},',
        f'  "system": "{loop.system.value}",',
        '  "coordinates": ' + json.dumps(list(loop.system.coords)) + ",",
        '  "basepoint": ' + _fmt_row(loop.basepoint) + ",",
    ]
    if loop.vertices:
        lines.append('  "vertices": [')
        rows = [f"    {_fmt_row(v)}" for v in loop.vertices]
        lines.append(",\n".join(rows))
        lines.append("  ],")
    else:
        lines.append('  "vertices": [],')
    lines.append('  "metadata": ' + json.dumps(loop.metadata, sort_keys=True, allow_nan=False))
    lines.append("}")
    return "\n".join(lines) + "\n"


def atomic_write_text(destination, text: str) -> None:
    dest = Path(destination)
    dest.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=dest.parent, prefix=f".{dest.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, dest)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_loop(loop: PolygonalLoop, destination) -> None:
    atomic_write_text(destination, dumps_loop(loop))


def loads_loop(text: str, source: str = "<string>") -> PolygonalLoop:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LoopFormatError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise LoopFormatError(f"{source}: top level must be an object")
    if doc.get("format") != FORMAT_NAME:
        raise LoopFormatError(f"{source}: field 'format' must be {FORMAT_NAME!r}, got {doc.get('format')!r}")
    if doc.get("version") != FORMAT_VERSION:
        raise LoopFormatError(f"{source}: unsupported field 'version' {doc.get('version')!r}")
    try:
        system = System.parse(doc.get("system"))
    except ValueError as exc:
        raise LoopFormatError(f"{source}: field 'system': {exc}") from None
    coords = doc.get("coordinates", list(system.coords))
    if list(coords) != list(system.coords):
        raise LoopFormatError(f"{source}: field 'coordinates' does not match {system.value} order {list(system.coords)}")
    try:
        base = _coerce_point(doc.get("basepoint", [0.0] * system.dim), system, "basepoint")
    except ValueError as exc:
        raise LoopFormatError(f"{source}: field {exc}") from None
    raw = doc.get("vertices")
    if not isinstance(raw, list):
        raise LoopFormatError(f"{source}: field 'vertices' must be a list")
    verts = []
    for i, v in enumerate(raw):
        try:
            verts.append(_coerce_point(v, system, f"vertices[{i}]"))
        except ValueError as exc:
            raise LoopFormatError(f"{source}: field {exc}") from None
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict):
        raise LoopFormatError(f"{source}: field 'metadata' must be an object")
    return PolygonalLoop(system, base, tuple(verts), meta)


def load_loop(source) -> PolygonalLoop:
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LoopFormatError(f"{path}: cannot read loop file ({exc.strerror})") from None
    return loads_loop(text, str(path))


def path_table(loop: PolygonalLoop, steps_per_edge: int = DEFAULT_STEPS_PER_EDGE) -> str:
    """Tab-separated trace of the subdivision lattice, one row per step, header first."""
    nodes = discretize(loop, steps_per_edge, "left").nodes[:-1]
    out = ["\t".join(loop.system.coords)]
    out.extend("\t".join(repr(float(v)) for v in row) for row in nodes)
    return "\n".join(out) + "\n"


def export_path(loop: PolygonalLoop, destination, steps_per_edge: int = DEFAULT_STEPS_PER_EDGE) -> None:
    atomic_write_text(destination, path_table(loop, steps_per_edge))
