# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled recurrences. Keep in lockstep with ``_kernels_py.py``."""
import numpy as np
from libc.math cimport fabs

BACKEND = "cython"


def first_order_forward(const double[::1] mu, const double[::1] d,
                        const double[::1] f, double x0):
    cdef Py_ssize_t n = mu.shape[0], i
    out = np.empty(n)
    cdef double[::1] x = out
    x[0] = x0
    for i in range(n - 1):
        x[i + 1] = (1.0 + mu[i] * d[i]) * x[i] + mu[i] * f[i]
    return out


def second_order_forward(const double[::1] mu, const double[::1] p,
                         const double[::1] q, const double[::1] f,
                         double x0, double x1):
    cdef Py_ssize_t n = mu.shape[0], i
    cdef double dx
    out = np.empty(n)
    cdef double[::1] x = out
    x[0] = x0
    x[1] = x1
    for i in range(n - 2):
        dx = (x[i + 1] - x[i]) / mu[i]
        x[i + 2] = x[i + 1] + mu[i + 1] * (dx + mu[i] * (f[i] - p[i] * dx - q[i] * x[i]))
    return out


def riccati_forward(const double[::1] mu, const double[::1] p,
                    const double[::1] q, double z0, double rtol):
    cdef Py_ssize_t n = mu.shape[0], i
    cdef double mz, c, lim
    out = np.empty(n)
    cdef double[::1] z = out
    z[0] = z0
    for i in range(n - 1):
        mz = mu[i] * z[i]
        c = 1.0 - mz
        lim = fabs(mz)
        if lim < 1.0:
            lim = 1.0
        if fabs(c) <= rtol * lim:
            return out[: i + 1].copy(), i
        z[i + 1] = (z[i] + mu[i] * (q[i] - p[i] * z[i])) / c
    return out, -1


def lemma_sup(const double[::1] mu, const double[::1] d):
    cdef Py_ssize_t n = mu.shape[0], i, arg = 0
    cdef double s = 0.0, best = 0.0
    for i in range(n - 1):
        s = fabs(1.0 + mu[i] * d[i]) * s + mu[i]
        if s > best:
            best = s
            arg = i + 1
    return best, arg
