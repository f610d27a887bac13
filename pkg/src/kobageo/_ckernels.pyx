# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the built-in defining functions.

Mirrors ``_pykernels.rho_builtin`` and ``_pykernels.exit_radii``; points are
passed as real arrays of shape ``(N, 2d)`` holding interleaved (re, im)
pairs, i.e. ``complex_array.view(float)``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, sqrt, pow, fabs
from libc.stdlib cimport malloc, free

cnp.import_array()

DEF BALL = 0
DEF POLYDISK = 1
DEF EX51 = 2
DEF EX52 = 3


cdef inline double _cutoff(double s, double a, double b) noexcept nogil:
    cdef double x, f1, f2
    if s <= a:
        return 1.0
    if s >= b:
        return 0.0
    x = (b - s) / (b - a)
    f1 = exp(-1.0 / x)
    f2 = exp(-1.0 / (1.0 - x))
    return f1 / (f1 + f2)


cdef double _rho(int kind, const double* p, const double* z, int d) noexcept nogil:
    cdef int j
    cdef double acc, re, im, val, best, a1, t, eps, phi0, chi, gap
    if kind == BALL:
        acc = 0.0
        for j in range(2 * d):
            re = z[j] - p[1 + j]
            acc += re * re
        return sqrt(acc) - p[0]
    if kind == POLYDISK:
        best = -1.0
        for j in range(d):
            re = z[2 * j] - p[d + 2 * j]
            im = z[2 * j + 1] - p[d + 2 * j + 1]
            val = sqrt(re * re + im * im) / p[j]
            if val > best:
                best = val
        return best - 1.0
    if kind == EX51:
        eps = p[0]
        a1 = z[0] * z[0] + z[1] * z[1]
        t = a1 + z[2] * z[2] + z[3] * z[3]
        phi0 = -z[3]
        if a1 > 0:
            phi0 += exp(-1.0 / a1)
        chi = 0.0
        if t > eps * eps:
            chi = pow(t - eps * eps, p[1])
        return p[2] * chi + phi0 * _cutoff(sqrt(t), 2 * eps, 3 * eps)
    if kind == EX52:
        eps = p[0]
        t = z[0] * z[0] + z[1] * z[1] + z[2] * z[2] + z[3] * z[3]
        phi0 = -z[3]
        if t > 0:
            phi0 += exp(-1.0 / t)
        gap = t - eps * eps
        chi = 0.0
        if gap > 0:
            chi = exp(p[1] - 1.0 / gap)
        return chi + phi0 * _cutoff(sqrt(t), 2 * eps, 3 * eps)
    return 0.0


def rho_batch(int kind, double[::1] params, double[:, ::1] pts):
    cdef Py_ssize_t n = pts.shape[0], i
    cdef int d = pts.shape[1] // 2
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _rho(kind, &params[0], &pts[i, 0], d)
    return out


cdef inline double _rho_at(int kind, const double* p, const double* z0,
                           const double* u, double t, double* buf, int m) noexcept nogil:
    cdef int j
    for j in range(m):
        buf[j] = z0[j] + t * u[j]
    return _rho(kind, p, buf, m // 2)


def exit_radii(int kind, double[::1] params, double[:, ::1] origins,
               double[:, ::1] dirs, double tmax, int n_march=32,
               double rtol=1e-10, int max_halvings=1100, int max_bisect=200):
    cdef Py_ssize_t n = origins.shape[0], i
    cdef int m = origins.shape[1], k, it
    cdef double lo, hi, t, step = tmax / n_march
    cdef bint found
    out = np.empty(n)
    cdef double[::1] o = out
    cdef double* buf = <double*> malloc(m * sizeof(double))
    cdef const double* p = &params[0]
    try:
        with nogil:
            for i in range(n):
                lo = 0.0
                hi = tmax
                found = False
                for k in range(1, n_march + 1):
                    t = step * k
                    if _rho_at(kind, p, &origins[i, 0], &dirs[i, 0], t, buf, m) >= 0:
                        hi = t
                        found = True
                        break
                    lo = t
                if not found:
                    o[i] = tmax
                    continue
                if lo == 0.0:
                    for it in range(max_halvings):
                        t = 0.5 * hi
                        if _rho_at(kind, p, &origins[i, 0], &dirs[i, 0], t, buf, m) < 0:
                            lo = t
                            break
                        hi = t
                        if t == 0.0:
                            break
                    if lo == 0.0:
                        o[i] = 0.0
                        continue
                for it in range(max_bisect):
                    if hi - lo <= rtol * lo:
                        break
                    t = 0.5 * (lo + hi)
                    if _rho_at(kind, p, &origins[i, 0], &dirs[i, 0], t, buf, m) < 0:
                        lo = t
                    else:
                        hi = t
                o[i] = lo
    finally:
        free(buf)
    return out
