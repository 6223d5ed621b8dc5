"""Floor powers floor(n**alpha), exact where it matters.

Two access paths with different contracts:

* :func:`floor_power` returns an exact Python integer.  Integer exponents
  use integer arithmetic; dyadic exponents with a small numerator (all
  half/quarter-integers such as 0.5, 1.5, 2.5) use exact integer root
  extraction; everything else is evaluated at 50 significant digits and
  refuses (:class:`FloorBoundaryError`) whenever n**alpha falls within
  1e-9 of an integer, because the caller's float exponent is then too
  coarse a proxy for the exponent they meant.

* :func:`floor_power_f64` returns float64 images for bulk numerical
  consumers (series, recurrences).  Near-integer ties are refined at high
  precision instead of raising; above 2**53 the float64 value of n**alpha
  is returned directly since the floor is not resolvable at double
  precision anyway.  Deterministic for fixed inputs.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

import mpmath
import numpy as np

from .errors import FloorBoundaryError

GUARD_BAND = 1e-9

# exact integer-root route refused above this many bits of n**numerator
_MAX_EXACT_BITS = 100_000


def _dyadic(alpha: float) -> tuple[int, int]:
    """alpha as (m, k) with alpha = m / 2**k, exact for every float."""
    frac = Fraction(alpha)
    return frac.numerator, frac.denominator.bit_length() - 1


def _iroot_pow2(value: int, k: int) -> int:
    """floor(value ** (1 / 2**k)) via k nested integer square roots."""
    for _ in range(k):
        value = isqrt(value)
    return value


def floor_power(n: int, alpha: float) -> int:
    """Exact floor(n**alpha) for n >= 0, alpha > 0.

    Raises FloorBoundaryError when the value is within 1e-9 of an integer
    and no exact route applies.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n <= 1:
        return n
    if float(alpha).is_integer():
        return n ** int(alpha)
    m, k = _dyadic(alpha)
    if m * n.bit_length() <= _MAX_EXACT_BITS:
        return _iroot_pow2(n**m, k)
    with mpmath.workdps(50):
        x = mpmath.power(n, alpha)
        f = int(mpmath.floor(x))
        dist = min(x - f, f + 1 - x)
        if dist < GUARD_BAND:
            raise FloorBoundaryError(
                f"{n}**{alpha!r} = {mpmath.nstr(x, 25)} lies within "
                f"{GUARD_BAND:g} of an integer; the floor is not reliable "
                f"for the exponent this float stands for"
            )
        return f


def _refine_f64(n: int, alpha: float) -> float:
    """High-precision floor for a single near-tie index, as float64."""
    with mpmath.workdps(50):
        return float(mpmath.floor(mpmath.power(n, alpha)))


# above this, a +-1 floor ambiguity is below 1e-12 relative and invisible
# to double-precision consumers; ties are not escalated there
_RESOLVE_MAX = 2.0**40


def floor_power_f64(alpha: float, n0: int, n1: int) -> np.ndarray:
    """float64 images of floor(n**alpha) for n in [n0, n1).

    Below 2**40, near-integer ties are refined at 50 digits so the values
    agree with :func:`floor_power` wherever that succeeds; above, the raw
    float64 floor is returned (a possible +-1 ambiguity there is below
    1e-12 relative).  Never raises on ties.  Deterministic.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if n0 < 0 or n1 < n0:
        raise ValueError(f"bad range [{n0}, {n1})")
    n = np.arange(n0, n1, dtype=np.float64)
    if n.size == 0:
        return n
    if float(alpha).is_integer() and (n1 - 1) ** int(alpha) < 2**62:
        out = (np.arange(n0, n1, dtype=np.int64) ** int(alpha)).astype(np.float64)
    else:
        x = n**alpha
        out = np.floor(x)
        margin = np.maximum(GUARD_BAND, 9e-16 * x)
        frac = np.abs(x - np.round(x))
        ties = np.nonzero((frac < margin) & (x < _RESOLVE_MAX) & (n >= 2))[0]
        for i in ties:
            out[i] = _refine_f64(int(n[i]), alpha)
    return out
