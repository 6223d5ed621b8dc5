#!/usr/bin/env python3
"""Benchmark: compiled recurrence kernel vs the pure-Python twin.

Usage: python benchmarks/bench_recurrence.py [--repeat 5]

Runs the three-term recurrence trace for the alpha=2 antitree matrix at
z = i over increasing lengths and reports the per-backend wall time and
the speedup.  The two backends must agree to rounding; the benchmark
checks that as it goes.
"""

import argparse
import time

import numpy as np

from defindex import AntitreeSpec, reduce_to_jacobi
from defindex import _kernels_py

try:
    from defindex import _kernels

    HAVE_EXT = True
except ImportError:
    HAVE_EXT = False


def bench(fn, a, b, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(a, b, 1j, 1.0 + 0j, 1j)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    J = reduce_to_jacobi(AntitreeSpec.power_law(2.0, 4))
    print(f"{'n_max':>10} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for n_max in (10_000, 100_000, 1_000_000):
        a = J.a_range(0, n_max)
        b = J.b_range(0, n_max)
        t_py, out_py = bench(_kernels_py.recurrence_trace, a, b, args.repeat)
        if HAVE_EXT:
            t_c, out_c = bench(_kernels.recurrence_trace, a, b, args.repeat)
            ok = np.isfinite(out_py[2]) & np.isfinite(out_c[2])
            assert np.allclose(out_py[2][ok], out_c[2][ok], rtol=1e-9), "backends disagree"
            print(
                f"{n_max:>10} {t_py * 1e3:>10.1f}ms {t_c * 1e3:>10.1f}ms "
                f"{t_py / t_c:>8.1f}x"
            )
        else:
            print(f"{n_max:>10} {t_py * 1e3:>10.1f}ms {'(no ext)':>12} {'':>9}")


if __name__ == "__main__":
    main()
