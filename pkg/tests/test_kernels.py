"""Compiled kernel vs pure-Python twin."""

import numpy as np
import pytest

from defindex import _kernels_py
from defindex._backend import KERNEL_BACKEND

try:
    from defindex import _kernels

    HAVE_EXT = True
except ImportError:
    HAVE_EXT = False


def _random_case(rng, n, growing):
    if growing:
        a = np.exp(rng.standard_normal(n))  # bounded-ish: solutions explode
    else:
        a = 0.7 * (np.arange(n, dtype=float) + 1.0) ** 1.8
    b = rng.standard_normal(n)
    z = complex(rng.standard_normal(), 0.5 + rng.random())
    u0 = complex(rng.standard_normal(), rng.standard_normal())
    u1 = complex(rng.standard_normal(), rng.standard_normal())
    return a, b, z, u0, u1


@pytest.mark.skipif(not HAVE_EXT, reason="compiled kernel not built")
@pytest.mark.parametrize("growing", [True, False])
def test_backends_agree(growing):
    rng = np.random.default_rng(31)
    for _ in range(5):
        a, b, z, u0, u1 = _random_case(rng, 3000, growing)
        v1, s1, p1 = _kernels.recurrence_trace(a, b, z, u0, u1)
        v2, s2, p2 = _kernels_py.recurrence_trace(a, b, z, u0, u1)
        assert np.allclose(v1, v2, rtol=1e-9, atol=1e-12)
        assert np.allclose(s1, s2, rtol=1e-9, atol=1e-9)
        ok = np.isfinite(p1) & np.isfinite(p2)
        assert np.allclose(p1[ok], p2[ok], rtol=1e-9, atol=1e-9)
        assert np.array_equal(np.isfinite(p1), np.isfinite(p2))


def test_python_twin_rescales():
    # exploding solution must stay inside the representable band
    rng = np.random.default_rng(5)
    a, b, z, u0, u1 = _random_case(rng, 4000, growing=True)
    v, s, p = _kernels_py.recurrence_trace(a, b, z, u0, u1)
    mag = np.abs(v)
    assert mag[mag > 0].max() <= 1e150
    assert np.all(np.isfinite(s))
    # log partial sums strictly grow for an exploding solution
    assert p[-1] > p[len(p) // 2]


def test_zero_values_do_not_poison_partial_sums():
    a = np.ones(100)
    b = np.zeros(100)
    v, s, p = _kernels_py.recurrence_trace(a, b, 0, 1, 0)
    # u = (1, 0, -1, 0, ...): the log square-sum of the nonzero entries
    assert np.isfinite(p[-1])
    assert p[0] == 0.0  # log(1)
    assert p[1] == 0.0  # adding |0|^2 changes nothing


def test_backend_reports_name():
    assert KERNEL_BACKEND in ("compiled", "python")
