"""Pure numpy holonomy kernels; same contract as the compiled ``_kernels``.

Work is vectorized over all steps of the loop; the ordered product is a
pairwise tree reduction that keeps later steps on the left.
"""
from __future__ import annotations

import numpy as np

_TAYLOR_DEGREE = 12
_TAYLOR_THETA = 0.25


def _step_grid(points: np.ndarray, steps: int, offset: float):
    a = points[:-1]
    d = (points[1:] - a) / steps
    j = np.arange(steps, dtype=float) + offset
    x = a[:, None, :] + j[None, :, None] * d[:, None, :]
    dd = np.broadcast_to(d[:, None, :], x.shape)
    dim = points.shape[1]
    return x.reshape(-1, dim), dd.reshape(-1, dim)


def _gen_one(x: np.ndarray, d: np.ndarray) -> np.ndarray:
    s1, s2 = np.sin(x[:, 0]), np.sin(x[:, 1])
    s1s, s2s = s1 * s1, s2 * s2
    h = 0.5 * np.sin(2.0 * x[:, 0]) * d[:, 2]
    e = np.exp(1j * (x[:, 3] - x[:, 2]))
    g = np.empty((len(x), 2, 2), dtype=np.complex128)
    g[:, 0, 0] = 1j * (s1s * d[:, 2])
    g[:, 0, 1] = s2 * np.conj(e) * (d[:, 0] + 1j * h)
    g[:, 1, 0] = -s2 * e * (d[:, 0] - 1j * h)
    g[:, 1, 1] = 1j * (s2s * (d[:, 3] - s1s * d[:, 2]))
    return g


def _exp_one(g: np.ndarray) -> np.ndarray:
    a0 = 0.5 * (g[:, 0, 0] + g[:, 1, 1])
    m = 0.5 * (g[:, 0, 0] - g[:, 1, 1])
    w = np.sqrt(np.maximum((-m * m - g[:, 0, 1] * g[:, 1, 0]).real, 0.0))
    ws = w * w
    small = w < 1e-4
    sinc = np.where(small, 1.0 - ws / 6.0 + ws * ws / 120.0 - ws**3 / 5040.0, np.sin(w) / np.where(small, 1.0, w))
    c = np.cos(w)
    ph = np.exp(a0.real) * np.exp(1j * a0.imag)
    out = np.empty_like(g)
    out[:, 0, 0] = ph * (c + sinc * m)
    out[:, 0, 1] = ph * (sinc * g[:, 0, 1])
    out[:, 1, 0] = ph * (sinc * g[:, 1, 0])
    out[:, 1, 1] = ph * (c - sinc * m)
    return out


def expm_taylor_batch(m: np.ndarray) -> np.ndarray:
    """Scaling-and-squaring Taylor exponential of a stack of square matrices."""
    n = m.shape[-1]
    norms = np.abs(m).sum(axis=-2).max(axis=-1)
    sq = np.zeros(len(m), dtype=int)
    big = norms > _TAYLOR_THETA
    sq[big] = np.ceil(np.log2(norms[big] / _TAYLOR_THETA)).astype(int)
    a = m * np.ldexp(1.0, -sq)[:, None, None]
    eye = np.eye(n, dtype=np.complex128)
    e = np.broadcast_to(eye, m.shape).copy()
    for j in range(_TAYLOR_DEGREE, 0, -1):
        e = (a @ e) / j
        e += eye
    for level in range(int(sq.max(initial=0))):
        sel = sq > level
        e[sel] = e[sel] @ e[sel]
    return e


def _ordered_product(mats: np.ndarray) -> np.ndarray:
    eye = np.eye(mats.shape[-1], dtype=np.complex128)
    while len(mats) > 1:
        if len(mats) % 2:
            mats = np.concatenate([mats, eye[None]])
        mats = mats[1::2] @ mats[0::2]
    return mats[0]


def _step_exps_two(x: np.ndarray, d: np.ndarray) -> np.ndarray:
    ga = _gen_one(x[:, :4], d[:, :4])
    gb = _gen_one(x[:, 4:8], d[:, 4:8])
    eye = np.eye(2)
    n = len(x)
    out = np.empty((n, 4, 4), dtype=np.complex128)
    flat = d[:, 8] == 0.0
    if flat.any():
        ea = _exp_one(ga[flat])
        eb = _exp_one(gb[flat])
        out[flat] = np.einsum("nac,nbd->nabcd", ea, eb).reshape(-1, 4, 4)
    full = ~flat
    if full.any():
        m = (
            np.einsum("nac,bd->nabcd", ga[full], eye) + np.einsum("ac,nbd->nabcd", eye, gb[full])
        ).reshape(-1, 4, 4)
        ca = np.cos(x[full, 1])
        cb = np.cos(x[full, 5])
        m[:, 3, 3] -= 1j * (ca * ca * cb * cb * d[full, 8])
        out[full] = expm_taylor_batch(m)
    return out


def polygon_holonomy(points, steps_per_edge: int, midpoint: bool = True) -> np.ndarray:
    """Holonomy of the closed vertex sequence ``points`` (basepoint first and last)."""
    pts = np.ascontiguousarray(points, dtype=float)
    if steps_per_edge < 1:
        raise ValueError("steps_per_edge must be >= 1")
    if pts.ndim != 2 or len(pts) < 2:
        raise ValueError("need at least two points")
    x, d = _step_grid(pts, int(steps_per_edge), 0.5 if midpoint else 0.0)
    if pts.shape[1] == 4:
        mats = _exp_one(_gen_one(x, d))
    elif pts.shape[1] == 9:
        mats = _step_exps_two(x, d)
    else:
        raise ValueError(f"points must have 4 or 9 columns, got {pts.shape[1]}")
    return _ordered_product(mats)
