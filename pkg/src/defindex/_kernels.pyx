# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled three-term recurrence kernel with overflow rescaling."""

from libc.math cimport exp, log, log1p, hypot, INFINITY

import numpy as np

cdef double _HI = 1e150
cdef double _LO = 1e-150


cdef inline double _logaddexp(double x, double y) noexcept nogil:
    cdef double t
    if x == -INFINITY:
        return y
    if y == -INFINITY:
        return x
    if x < y:
        t = x
        x = y
        y = t
    return x + log1p(exp(y - x))


def recurrence_trace(a, b, z, u0, u1):
    """Same contract as defindex._kernels_py.recurrence_trace."""
    cdef double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    if av.shape[0] != bv.shape[0]:
        raise ValueError("a and b must be 1-d arrays of equal length")
    cdef Py_ssize_t n_max = av.shape[0]
    if n_max < 1:
        raise ValueError("need at least one recurrence coefficient")

    values = np.empty(n_max + 1, dtype=np.complex128)
    log_scale = np.zeros(n_max + 1, dtype=np.float64)
    log_psum = np.empty(n_max + 1, dtype=np.float64)
    cdef double complex[::1] vv = values
    cdef double[::1] lsv = log_scale
    cdef double[::1] lpv = log_psum

    cdef double complex zc = complex(z)
    cdef double complex w0 = complex(u0)
    cdef double complex w1 = complex(u1)
    cdef double complex w2
    cdef double scale = 0.0
    cdef double lp = -INFINITY
    cdef double m
    cdef Py_ssize_t n

    vv[0] = w0
    vv[1] = w1
    m = hypot(w0.real, w0.imag)
    if m > 0.0:
        lp = _logaddexp(lp, 2.0 * log(m))
    lpv[0] = lp
    m = hypot(w1.real, w1.imag)
    if m > 0.0:
        lp = _logaddexp(lp, 2.0 * log(m))
    lpv[1] = lp

    with nogil:
        for n in range(1, n_max):
            w2 = ((zc - bv[n]) * w1 - av[n - 1] * w0) / av[n]
            m = hypot(w2.real, w2.imag)
            if m > 0.0:
                lp = _logaddexp(lp, 2.0 * (log(m) + scale))
            lpv[n + 1] = lp
            if m > _HI or (0.0 < m < _LO):
                w2 = w2 / m
                w1 = w1 / m
                scale += log(m)
            vv[n + 1] = w2
            lsv[n + 1] = scale
            w0 = w1
            w1 = w2
    return values, log_scale, log_psum
