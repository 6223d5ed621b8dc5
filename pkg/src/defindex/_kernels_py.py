"""Pure-Python twin of the compiled recurrence kernel.

Same contract as defindex._kernels.recurrence_trace; used automatically
when the extension is unavailable or DEFINDEX_PURE_PYTHON=1 is set.
"""

from __future__ import annotations

from math import exp, log, log1p, inf

import numpy as np

_HI = 1e150
_LO = 1e-150


def _logaddexp(x: float, y: float) -> float:
    if x == -inf:
        return y
    if y == -inf:
        return x
    if x < y:
        x, y = y, x
    return x + log1p(exp(y - x))


def recurrence_trace(a, b, z, u0, u1):
    """Run u(n+1) = ((z - b_n) u(n) - a_{n-1} u(n-1)) / a_n for n >= 1.

    a, b: float64 arrays of length n_max (entries 0 .. n_max-1); computes
    u(0 .. n_max) from the initial pair (u0, u1).  Values are rescaled to
    [1e-150, 1e150] with per-index log scales; returns

        (values, log_scale, log_psum)

    with u_true(n) = values[n] * exp(log_scale[n]) and log_psum[n] the
    natural log of sum_{k<=n} |u_true(k)|**2.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("a and b must be 1-d arrays of equal length")
    n_max = a.shape[0]
    if n_max < 1:
        raise ValueError("need at least one recurrence coefficient")
    z = complex(z)
    values = np.empty(n_max + 1, dtype=np.complex128)
    log_scale = np.zeros(n_max + 1, dtype=np.float64)
    log_psum = np.empty(n_max + 1, dtype=np.float64)

    w0 = complex(u0)
    w1 = complex(u1)
    values[0] = w0
    values[1] = w1
    scale = 0.0
    lp = -inf
    m = abs(w0)
    if m > 0.0:
        lp = _logaddexp(lp, 2.0 * log(m))
    log_psum[0] = lp
    m = abs(w1)
    if m > 0.0:
        lp = _logaddexp(lp, 2.0 * log(m))
    log_psum[1] = lp

    for n in range(1, n_max):
        w2 = ((z - b[n]) * w1 - a[n - 1] * w0) / a[n]
        m = abs(w2)
        if m > 0.0:
            lp = _logaddexp(lp, 2.0 * (log(m) + scale))
        log_psum[n + 1] = lp
        if m > _HI or (0.0 < m < _LO):
            w2 /= m
            w1 /= m
            scale += log(m)
        values[n + 1] = w2
        log_scale[n + 1] = scale
        w0 = w1
        w1 = w2
    return values, log_scale, log_psum
