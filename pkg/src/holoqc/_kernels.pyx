# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled holonomy kernels for polygonal loops under the analytic connection.

Mirrors :mod:`holoqc._pykernels` step for step.
"""
import numpy as np

from libc.math cimport sin, cos, exp, sqrt, ceil, log2, ldexp

ctypedef double complex cplx

cdef int TAYLOR_DEGREE = 12
cdef double TAYLOR_THETA = 0.25


cdef inline cplx cexpi(double x) noexcept nogil:
    return cos(x) + 1j * sin(x)


cdef inline cplx cconj(cplx z) noexcept nogil:
    return z.real - 1j * z.imag


cdef inline void gen_one(const double* x, const double* d, cplx* g) noexcept nogil:
    # -(A_theta1 d theta1 + A_phi1 d phi1 + A_phi2 d phi2), row-major 2x2
    cdef double s1 = sin(x[0]), s2 = sin(x[1])
    cdef double s1s = s1 * s1, s2s = s2 * s2
    cdef double h = 0.5 * sin(2.0 * x[0]) * d[2]
    cdef cplx e = cexpi(x[3] - x[2])
    g[0] = 1j * (s1s * d[2])
    g[1] = s2 * cconj(e) * (d[0] + 1j * h)
    g[2] = -s2 * e * (d[0] - 1j * h)
    g[3] = 1j * (s2s * (d[3] - s1s * d[2]))


cdef inline void exp_one(const cplx* g, cplx* out) noexcept nogil:
    cdef cplx a0 = 0.5 * (g[0] + g[3])
    cdef cplx m = 0.5 * (g[0] - g[3])
    cdef double w2 = (-m * m - g[1] * g[2]).real
    cdef double w, sinc, c, ws
    if w2 < 0.0:
        w2 = 0.0
    w = sqrt(w2)
    if w < 1e-4:
        ws = w * w
        sinc = 1.0 - ws / 6.0 + ws * ws / 120.0 - ws * ws * ws / 5040.0
    else:
        sinc = sin(w) / w
    c = cos(w)
    cdef cplx ph = exp(a0.real) * cexpi(a0.imag)
    out[0] = ph * (c + sinc * m)
    out[1] = ph * (sinc * g[1])
    out[2] = ph * (sinc * g[2])
    out[3] = ph * (c - sinc * m)


cdef inline void matmul(const cplx* a, const cplx* b, cplx* out, int n) noexcept nogil:
    cdef int i, j, l
    cdef cplx s
    for i in range(n):
        for j in range(n):
            s = 0
            for l in range(n):
                s = s + a[i * n + l] * b[l * n + j]
            out[i * n + j] = s


cdef void expm_taylor(const cplx* m, cplx* out, int n) noexcept nogil:
    cdef cplx a[16]
    cdef cplx e[16]
    cdef cplx t[16]
    cdef int i, j, jj, sq = 0, nn = n * n
    cdef double norm = 0.0, col
    for j in range(n):
        col = 0.0
        for i in range(n):
            col += sqrt(m[i * n + j].real ** 2 + m[i * n + j].imag ** 2)
        if col > norm:
            norm = col
    if norm > TAYLOR_THETA:
        sq = <int>ceil(log2(norm / TAYLOR_THETA))
    cdef double scale = ldexp(1.0, -sq)
    # lowest degree whose remainder bound x^(d+1)/(d+1)! e^x is below 2^-53
    cdef double x = norm * scale, term = 0.5 * x * x
    cdef int degree = 1
    while degree < TAYLOR_DEGREE and term * exp(x) > 1.1102230246251565e-16:
        degree += 1
        term *= x / (degree + 1)
    for i in range(nn):
        a[i] = m[i] * scale
        e[i] = 0
    for i in range(n):
        e[i * n + i] = 1
    for jj in range(degree, 0, -1):
        matmul(a, e, t, n)
        for i in range(nn):
            e[i] = t[i] / jj
        for i in range(n):
            e[i * n + i] = e[i * n + i] + 1
    for jj in range(sq):
        matmul(e, e, t, n)
        for i in range(nn):
            e[i] = t[i]
    for i in range(nn):
        out[i] = e[i]


cdef void holonomy_one(const double* pts, int npts, int steps, double offset, cplx* u) noexcept nogil:
    cdef double x[4]
    cdef double d[4]
    cdef cplx g[4]
    cdef cplx ex[4]
    cdef cplx t[4]
    cdef int edge, j, c
    u[0] = 1; u[1] = 0; u[2] = 0; u[3] = 1
    for edge in range(npts - 1):
        for c in range(4):
            d[c] = (pts[(edge + 1) * 4 + c] - pts[edge * 4 + c]) / steps
        for j in range(steps):
            for c in range(4):
                x[c] = pts[edge * 4 + c] + (j + offset) * d[c]
            gen_one(x, d, g)
            exp_one(g, ex)
            matmul(ex, u, t, 2)
            for c in range(4):
                u[c] = t[c]


cdef void holonomy_two(const double* pts, int npts, int steps, double offset, cplx* u) noexcept nogil:
    cdef double x[9]
    cdef double d[9]
    cdef cplx ga[4]
    cdef cplx gb[4]
    cdef cplx ea[4]
    cdef cplx eb[4]
    cdef cplx m[16]
    cdef cplx ex[16]
    cdef cplx t[16]
    cdef int edge, j, c, a, b, a2, b2
    cdef double ca, cb
    for c in range(16):
        u[c] = 0
    for c in range(4):
        u[c * 4 + c] = 1
    for edge in range(npts - 1):
        for c in range(9):
            d[c] = (pts[(edge + 1) * 9 + c] - pts[edge * 9 + c]) / steps
        for j in range(steps):
            for c in range(9):
                x[c] = pts[edge * 9 + c] + (j + offset) * d[c]
            gen_one(x, d, ga)
            gen_one(&x[4], &d[4], gb)
            if d[8] == 0.0:
                exp_one(ga, ea)
                exp_one(gb, eb)
                for a in range(2):
                    for b in range(2):
                        for a2 in range(2):
                            for b2 in range(2):
                                ex[(2 * a + b) * 4 + 2 * a2 + b2] = ea[2 * a + a2] * eb[2 * b + b2]
            else:
                for a in range(2):
                    for b in range(2):
                        for a2 in range(2):
                            for b2 in range(2):
                                m[(2 * a + b) * 4 + 2 * a2 + b2] = (
                                    (ga[2 * a + a2] if b == b2 else 0)
                                    + (gb[2 * b + b2] if a == a2 else 0)
                                )
                ca = cos(x[1])
                cb = cos(x[5])
                m[15] = m[15] - 1j * (ca * ca * cb * cb * d[8])
                expm_taylor(m, ex, 4)
            matmul(ex, u, t, 4)
            for c in range(16):
                u[c] = t[c]


def polygon_holonomy(double[:, ::1] points, int steps_per_edge, bint midpoint=True):
    """Holonomy of the closed vertex sequence ``points`` (basepoint first and last)."""
    cdef int npts = points.shape[0], dim = points.shape[1]
    cdef double offset = 0.5 if midpoint else 0.0
    if steps_per_edge < 1:
        raise ValueError("steps_per_edge must be >= 1")
    if npts < 2:
        raise ValueError("need at least two points")
    out = np.empty((2, 2) if dim == 4 else (4, 4), dtype=np.complex128)
    cdef cplx[:, ::1] u = out
    if dim == 4:
        with nogil:
            holonomy_one(&points[0, 0], npts, steps_per_edge, offset, &u[0, 0])
    elif dim == 9:
        with nogil:
            holonomy_two(&points[0, 0], npts, steps_per_edge, offset, &u[0, 0])
    else:
        raise ValueError(f"points must have 4 or 9 columns, got {dim}")
    return out
