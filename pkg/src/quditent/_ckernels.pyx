# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: complex Jacobi eigensolver and convex-roof pattern search.

Mirrors ``_pykernels`` exactly; the heavy loops run without the GIL.
"""

import numpy as np

from libc.math cimport sqrt, cos, sin, fabs
from libc.stdlib cimport malloc, free

CONCURRENCE = 0
NEGATIVITY = 1

cdef double _TINY = 1e-300


cdef inline double _abs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef int _jacobi(double complex* a, int n, double* w, double complex* v,
                 double rel_tol, int max_sweeps, int* converged) noexcept nogil:
    """In-place Jacobi on row-major ``a``; ``v`` may be NULL. Returns sweeps."""
    cdef int i, k, p, q, sweep
    cdef double scale = 0.0, off, g, app, aqq, zeta, t, c, s
    cdef double complex apq, e, ec, x, y
    for i in range(n * n):
        scale += _abs2(a[i])
    scale = sqrt(scale)
    if v != NULL:
        for i in range(n * n):
            v[i] = 0.0
        for i in range(n):
            v[i * n + i] = 1.0
    converged[0] = 0
    sweep = 0
    while True:
        off = 0.0
        for p in range(n):
            for q in range(n):
                if p != q:
                    off += _abs2(a[p * n + q])
        if sqrt(off) <= rel_tol * scale:
            converged[0] = 1
            break
        if sweep == max_sweeps:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p * n + q]
                g = sqrt(_abs2(apq))
                if g <= _TINY:
                    continue
                e = apq / g
                ec = e.conjugate()
                app = a[p * n + p].real
                aqq = a[q * n + q].real
                zeta = (aqq - app) / (2.0 * g)
                t = 1.0 / (fabs(zeta) + sqrt(1.0 + zeta * zeta))
                if zeta < 0.0:
                    t = -t
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    x = a[k * n + p]
                    y = a[k * n + q]
                    a[k * n + p] = c * x - s * ec * y
                    a[k * n + q] = s * x + c * ec * y
                for k in range(n):
                    x = a[p * n + k]
                    y = a[q * n + k]
                    a[p * n + k] = c * x - s * e * y
                    a[q * n + k] = s * x + c * e * y
                a[p * n + q] = 0.0
                a[q * n + p] = 0.0
                a[p * n + p] = app - t * g
                a[q * n + q] = aqq + t * g
                if v != NULL:
                    for k in range(n):
                        x = v[k * n + p]
                        y = v[k * n + q]
                        v[k * n + p] = c * x - s * ec * y
                        v[k * n + q] = s * x + c * ec * y
    for i in range(n):
        w[i] = a[i * n + i].real
    return sweep


def jacobi_eigh(h, double rel_tol=1e-12, int max_sweeps=100):
    """Cyclic complex Jacobi diagonalization; see ``_pykernels.jacobi_eigh``."""
    cdef double complex[:, ::1] a = np.array(h, dtype=np.complex128, order="C", copy=True)
    cdef int n = a.shape[0]
    w_arr = np.empty(n, dtype=np.float64)
    v_arr = np.empty((n, n), dtype=np.complex128)
    cdef double[::1] w = w_arr
    cdef double complex[:, ::1] v = v_arr
    cdef int sweeps = 0, conv = 1
    if n > 0:
        with nogil:
            sweeps = _jacobi(&a[0, 0], n, &w[0], &v[0, 0], rel_tol, max_sweeps, &conv)
    return w_arr, v_arr, sweeps, bool(conv)


cdef double _minor_sum(const double complex* w, int m, int n) noexcept nogil:
    cdef int i, k, j, l
    cdef double total = 0.0
    for i in range(m - 1):
        for k in range(i + 1, m):
            for j in range(n - 1):
                for l in range(j + 1, n):
                    total += _abs2(w[i * n + j] * w[k * n + l] - w[i * n + l] * w[k * n + j])
    return total


cdef struct Work:
    double complex* gram
    double* lam


cdef double _member_value(const double complex* w, int m, int n, int measure,
                          double eps, Work* work) noexcept nogil:
    cdef int d = m if m < n else n
    cdef int i, j, k, conv
    cdef double x, s1, s2, sig
    cdef double complex acc
    if measure == 0:
        x = _minor_sum(w, m, n)
        return sqrt(4.0 * x + eps * eps) - eps
    if d < 2:
        return 0.0
    if d == 2:
        x = _minor_sum(w, m, n)
        return 2.0 * (sqrt(x + eps * eps) - eps)
    if m <= n:
        for i in range(m):
            for j in range(m):
                acc = 0.0
                for k in range(n):
                    acc = acc + w[i * n + k] * w[j * n + k].conjugate()
                work.gram[i * m + j] = acc
    else:
        for i in range(n):
            for j in range(n):
                acc = 0.0
                for k in range(m):
                    acc = acc + w[k * n + i].conjugate() * w[k * n + j]
                work.gram[i * n + j] = acc
    _jacobi(work.gram, d, work.lam, NULL, 1e-12, 100, &conv)
    s1 = 0.0
    s2 = 0.0
    for i in range(d):
        x = work.lam[i]
        if x < 0.0:
            x = 0.0
        sig = sqrt(x + eps * eps) - eps
        s1 += sig
        s2 += sig * sig
    return (s1 * s1 - s2) / (d - 1)


def member_values(W, int m, int n, int measure, double eps=0.0):
    """Per-member weighted measure p_j * M(psi_j) of unnormalized rows of W."""
    cdef double complex[:, ::1] w = np.ascontiguousarray(W, dtype=np.complex128)
    cdef int L = w.shape[0], j
    out = np.empty(L, dtype=np.float64)
    cdef double[::1] o = out
    cdef Work work
    cdef int d = m if m < n else n
    work.gram = <double complex*> malloc(max(d * d, 1) * sizeof(double complex))
    work.lam = <double*> malloc(max(d, 1) * sizeof(double))
    try:
        with nogil:
            for j in range(L):
                o[j] = _member_value(&w[j, 0], m, n, measure, eps, &work)
    finally:
        free(work.gram)
        free(work.lam)
    return out


cdef inline void _rotate(const double complex* wa, const double complex* wb,
                         double complex* na, double complex* nb, int D,
                         double theta, double phi) noexcept nogil:
    cdef double c = cos(theta), s = sin(theta)
    cdef double complex e = cos(phi) + 1j * sin(phi)
    cdef double complex ec = e.conjugate()
    cdef int i
    for i in range(D):
        na[i] = c * wa[i] - e * s * wb[i]
        nb[i] = ec * s * wa[i] + c * wb[i]


def roof_descent(W, int m, int n, int measure, double eps, int max_sweeps,
                 double sweep_tol=1e-14, double step_floor=1e-8):
    """Pairwise Givens-rotation pattern search; see ``_pykernels.roof_descent``."""
    cdef double complex[:, ::1] w = W
    cdef int L = w.shape[0], D = w.shape[1]
    cdef int a, b, i, k, it, moved, improved, sweep, done = 0, used = max_sweeps
    cdef double cur, theta, phi, step, dt, dp, va, vb, before, total, bva = 0.0, bvb = 0.0
    cdef int d = m if m < n else n
    cdef Work work
    cdef double* vals = <double*> malloc(max(L, 1) * sizeof(double))
    cdef double complex* na = <double complex*> malloc(D * sizeof(double complex))
    cdef double complex* nb = <double complex*> malloc(D * sizeof(double complex))
    cdef double complex* ba = <double complex*> malloc(D * sizeof(double complex))
    cdef double complex* bb = <double complex*> malloc(D * sizeof(double complex))
    work.gram = <double complex*> malloc(max(d * d, 1) * sizeof(double complex))
    work.lam = <double*> malloc(max(d, 1) * sizeof(double))
    try:
        with nogil:
            for a in range(L):
                vals[a] = _member_value(&w[a, 0], m, n, measure, eps, &work)
            for sweep in range(1, max_sweeps + 1):
                before = 0.0
                for a in range(L):
                    before += vals[a]
                for a in range(L - 1):
                    for b in range(a + 1, L):
                        cur = vals[a] + vals[b]
                        theta = 0.0
                        phi = 0.0
                        step = 0.3
                        it = 0
                        improved = 0
                        while step > step_floor and it < 100:
                            it += 1
                            moved = 0
                            for k in range(4):
                                dt = 0.0
                                dp = 0.0
                                if k == 0:
                                    dt = step
                                elif k == 1:
                                    dt = -step
                                elif k == 2:
                                    dp = step
                                else:
                                    dp = -step
                                _rotate(&w[a, 0], &w[b, 0], na, nb, D, theta + dt, phi + dp)
                                va = _member_value(na, m, n, measure, eps, &work)
                                vb = _member_value(nb, m, n, measure, eps, &work)
                                if va + vb < cur:
                                    cur = va + vb
                                    theta = theta + dt
                                    phi = phi + dp
                                    for i in range(D):
                                        ba[i] = na[i]
                                        bb[i] = nb[i]
                                    bva = va
                                    bvb = vb
                                    improved = 1
                                    moved = 1
                                    step *= 2.0
                                    break
                            if not moved:
                                step *= 0.25
                        if improved:
                            for i in range(D):
                                w[a, i] = ba[i]
                                w[b, i] = bb[i]
                            vals[a] = bva
                            vals[b] = bvb
                total = 0.0
                for a in range(L):
                    total += vals[a]
                if before - total < sweep_tol:
                    done = 1
                    used = sweep
                    break
    finally:
        free(vals)
        free(na)
        free(nb)
        free(ba)
        free(bb)
        free(work.gram)
        free(work.lam)
    return used, bool(done)
