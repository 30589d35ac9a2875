# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled per-triangle p-Rayleigh kernels; see ``_kernels_py`` for the reference."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, floor, pow, sqrt

cnp.import_array()


cdef struct Power:
    # a**e as a**k (times sqrt(a) when half) when 2e is an integer below 64
    double e
    int k
    bint half
    bint fast


cdef Power _power(double e):
    cdef Power w
    w.e = e
    w.fast = e >= 0.0 and e < 32.0 and 2.0 * e == floor(2.0 * e)
    w.k = <int>floor(e) if w.fast else 0
    w.half = w.fast and e != floor(e)
    return w


cdef inline double _pow(double a, Power w) nogil:
    cdef double r = 1.0, b = a
    cdef int k = w.k
    if not w.fast:
        return pow(a, w.e)
    while k:
        if k & 1:
            r *= b
        b *= b
        k >>= 1
    if w.half:
        r *= sqrt(a)
    return r


def energy_grad(const double[::1] u, const long long[:, ::1] tri,
                const double[:, :, ::1] grads, const double[::1] area, double p):
    cdef Py_ssize_t nt = tri.shape[0], t, i
    cdef double gx, gy, n2, gp2, coef, total = 0.0
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(u.shape[0])
    cdef double[::1] g = out
    cdef bint quadratic = p == 2.0
    cdef Power w = _power(0.5 * p - 1.0)
    for t in range(nt):
        gx = 0.0
        gy = 0.0
        for i in range(3):
            gx += u[tri[t, i]] * grads[t, i, 0]
            gy += u[tri[t, i]] * grads[t, i, 1]
        n2 = gx * gx + gy * gy
        if quadratic:
            gp2 = 1.0
        elif n2 > 0.0:
            gp2 = _pow(n2, w)
        else:
            gp2 = 0.0
        total += gp2 * n2 * area[t]
        coef = p * gp2 * area[t]
        for i in range(3):
            g[tri[t, i]] += coef * (gx * grads[t, i, 0] + gy * grads[t, i, 1])
    return total, out


def mass_grad(const double[::1] u, const long long[:, ::1] tri, const double[::1] area,
              const double[:, ::1] bary, const double[::1] wq, double p):
    cdef Py_ssize_t nt = tri.shape[0], nq = bary.shape[0], t, q, i
    cdef double uq, a, ap2, w, s, total = 0.0
    cdef Power e = _power(p - 2.0)
    cdef double u0, u1, u2
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(u.shape[0])
    cdef double[::1] g = out
    cdef bint quadratic = p == 2.0
    for t in range(nt):
        u0 = u[tri[t, 0]]
        u1 = u[tri[t, 1]]
        u2 = u[tri[t, 2]]
        for q in range(nq):
            uq = bary[q, 0] * u0 + bary[q, 1] * u1 + bary[q, 2] * u2
            a = fabs(uq)
            if quadratic:
                ap2 = 1.0
            elif a > 0.0:
                ap2 = _pow(a, e)
            else:
                ap2 = 0.0
            w = area[t] * wq[q]
            total += ap2 * a * a * w
            s = p * ap2 * uq * w
            for i in range(3):
                g[tri[t, i]] += s * bary[q, i]
    return total, out


def quad_values(const double[::1] u, const long long[:, ::1] tri, const double[:, ::1] bary):
    cdef Py_ssize_t nt = tri.shape[0], nq = bary.shape[0], t, q
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((nt, nq))
    cdef double[:, ::1] o = out
    cdef double u0, u1, u2
    for t in range(nt):
        u0 = u[tri[t, 0]]
        u1 = u[tri[t, 1]]
        u2 = u[tri[t, 2]]
        for q in range(nq):
            o[t, q] = bary[q, 0] * u0 + bary[q, 1] * u1 + bary[q, 2] * u2
    return out


def constraint(const double[:, ::1] uq, const double[:, ::1] W, double c, double p):
    cdef Py_ssize_t nt = uq.shape[0], nq = uq.shape[1], t, q
    cdef double d, a, ap2, val = 0.0, scale = 0.0
    cdef Power e = _power(p - 2.0)
    cdef bint quadratic = p == 2.0
    for t in range(nt):
        for q in range(nq):
            d = uq[t, q] - c
            a = fabs(d)
            if quadratic:
                ap2 = 1.0
            elif a > 0.0:
                ap2 = _pow(a, e)
            else:
                ap2 = 0.0
            val += ap2 * d * W[t, q]
            scale += ap2 * a * W[t, q]
    return val, scale
