"""Semi-infinite Jacobi matrices and the deficiency-index machinery.

A Jacobi matrix J has positive off-diagonal entries a_n and real diagonal
entries b_n.  Its deficiency index is 0 or 1:

* Carleman: if the reciprocal off-diagonal sum diverges, J is essentially
  self-adjoint (index 0).
* Berezanskii: if the sum converges, the off-diagonals are eventually
  log-concave (a_{n-1} a_{n+1} <= a_n**2) and the diagonal is bounded,
  the index is 1.
* Kato-Rellich: a bounded difference between two Jacobi matrices leaves
  the deficiency indices unchanged.

The numerical classifier is an independent route: it integrates the
three-term recurrence at z = i and decides between limit point (index 0)
and limit circle (index 1) from the growth of the square-sum of the
solutions, with a deliberate inconclusive band near the boundary.

Analytic facts enter through a per-matrix :class:`AnalyticRules` registry.
Numerical scans never override a decisive rule; a contradiction raises
:class:`InternalInconsistencyError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from ._backend import KERNEL_BACKEND, recurrence_trace
from .errors import (
    ContractError,
    FloorBoundaryError,
    InternalInconsistencyError,
    InvariantViolationError,
)
from . import floorpow

_LN10 = math.log(10.0)


# ---------------------------------------------------------------------------
# matrix type and rule registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnalyticRules:
    """Certified analytic facts about a Jacobi matrix.

    ``reciprocal_sum`` is "divergent" or "convergent" when the behaviour of
    sum 1/a_n is established by a comparison/telescoping argument, with the
    argument named in ``reciprocal_sum_reason``.  ``reciprocal_tail`` bounds
    sum_{n>N} 1/a_n.  ``log_concave_from`` certifies a_{n-1} a_{n+1} <= a_n**2
    for every n >= n0.  ``exact_compare`` resolves single log-concavity
    comparisons in exact arithmetic (sign of a_{n-1} a_{n+1} - a_n**2).
    """

    reciprocal_sum: Optional[str] = None
    reciprocal_sum_reason: str = ""
    reciprocal_tail: Optional[Callable[[int], float]] = None
    reciprocal_sum_exact: Optional[float] = None
    log_concave_from: Optional[int] = None
    log_concave_reason: str = ""
    diagonal_sup: Optional[float] = None
    exact_compare: Optional[Callable[[int], int]] = None


class JacobiMatrix:
    """Off-diagonal rule a_n > 0 and diagonal rule b_n, block-evaluable.

    ``a_block(n0, n1)`` must return float64 a_n for n in [n0, n1); the
    diagonal defaults to zero.  ``max_index`` limits the evaluable range
    for matrices backed by finite data (None = unbounded).
    """

    def __init__(
        self,
        a_block: Callable[[int, int], np.ndarray],
        b_block: Optional[Callable[[int, int], np.ndarray]] = None,
        *,
        max_index: Optional[int] = None,
        rules: Optional[AnalyticRules] = None,
        provenance: Optional[tuple] = None,
        name: str = "jacobi",
    ):
        self._a_block = a_block
        self._b_block = b_block
        self.max_index = max_index
        self.rules = rules or AnalyticRules()
        self.provenance = provenance
        self.name = name

    @classmethod
    def from_sequences(
        cls,
        a: Sequence[float],
        b: Optional[Sequence[float]] = None,
        *,
        rules: Optional[AnalyticRules] = None,
        name: str = "jacobi",
    ) -> "JacobiMatrix":
        a_arr = np.asarray(a, dtype=np.float64)
        b_arr = None if b is None else np.asarray(b, dtype=np.float64)
        if b_arr is not None and b_arr.shape != a_arr.shape:
            raise ValueError("a and b sequences must have equal length")
        return cls(
            lambda n0, n1: a_arr[n0:n1].copy(),
            None if b_arr is None else (lambda n0, n1: b_arr[n0:n1].copy()),
            max_index=len(a_arr) - 1,
            rules=rules,
            name=name,
        )

    def _check_range(self, n0: int, n1: int):
        if n0 < 0 or n1 < n0:
            raise ValueError(f"bad index range [{n0}, {n1})")
        if self.max_index is not None and n1 - 1 > self.max_index:
            raise ValueError(
                f"{self.name}: index {n1 - 1} beyond evaluable range "
                f"(max_index={self.max_index})"
            )

    def a_range(self, n0: int, n1: int) -> np.ndarray:
        """a_n for n in [n0, n1); validates positivity."""
        self._check_range(n0, n1)
        a = np.asarray(self._a_block(n0, n1), dtype=np.float64)
        if a.size and not (a > 0).all():
            bad = int(np.argmin(a > 0)) + n0
            raise InvariantViolationError(
                f"{self.name}: off-diagonal a_{bad} = {a[bad - n0]} is not positive"
            )
        return a

    def b_range(self, n0: int, n1: int) -> np.ndarray:
        self._check_range(n0, n1)
        if self._b_block is None:
            return np.zeros(n1 - n0)
        return np.asarray(self._b_block(n0, n1), dtype=np.float64)

    def a(self, n: int) -> float:
        return float(self.a_range(n, n + 1)[0])

    def b(self, n: int) -> float:
        return float(self.b_range(n, n + 1)[0])

    def with_diagonal(
        self,
        b_block: Callable[[int, int], np.ndarray],
        sup_bound: Optional[float] = None,
        name: Optional[str] = None,
    ) -> "JacobiMatrix":
        """Same off-diagonal, new diagonal.  ``sup_bound`` certifies
        sup |b_n| when the caller can vouch for it."""
        rules = replace(self.rules, diagonal_sup=sup_bound)
        return JacobiMatrix(
            self._a_block,
            b_block,
            max_index=self.max_index,
            rules=rules,
            provenance=None,
            name=name or f"{self.name}+diag",
        )


# ---------------------------------------------------------------------------
# concrete families
# ---------------------------------------------------------------------------


def _power_law_tail(alpha: float, n_start: int) -> Callable[[int], float]:
    """Certified bound on sum_{n>N} 1/a_n when 1/a_n <= c n**-alpha for
    n >= n_start: integral comparison, valid for N >= n_start."""

    def tail(N: int, _a=alpha, _s=n_start) -> float:
        if N < _s:
            raise ValueError(f"tail bound valid only for N >= {_s}")
        c = 2.0 if _s > 1 else 1.0
        return c * N ** (1.0 - _a) / (_a - 1.0)

    return tail


def floor_power_rules(alpha: float) -> AnalyticRules:
    """Rule registry for a_n = sqrt(s_n s_{n+1}), s_0 = 1,
    s_n = floor(n**alpha).

    Divergence for alpha <= 1 by comparison with the harmonic series
    (a_n <= (n+1)**alpha <= n+1); convergence for alpha > 1 since
    s_n >= n**alpha / 2 once n**alpha >= 2, giving 1/a_n <= 2 n**-alpha.
    For alpha = 2 the sum telescopes: a_n = n(n+1) exactly and the total
    is exactly 2 with tail 1/(N+1).
    """

    def exact_compare(n: int, _a=alpha) -> int:
        def s(k: int) -> int:
            return 1 if k == 0 else floorpow.floor_power(k, _a)

        lhs = s(n - 1) * s(n + 2)
        rhs = s(n) * s(n + 1)
        return (lhs > rhs) - (lhs < rhs)

    if alpha <= 1:
        return AnalyticRules(
            reciprocal_sum="divergent",
            reciprocal_sum_reason=(
                f"a_n <= (n+1)**{alpha:g} <= n+1, so the reciprocal sum "
                "dominates the harmonic series"
            ),
            exact_compare=exact_compare,
            diagonal_sup=0.0,
        )
    if alpha == 2:
        return AnalyticRules(
            reciprocal_sum="convergent",
            reciprocal_sum_reason="a_0 = 1, a_n = n(n+1); the sum telescopes to 2",
            reciprocal_tail=lambda N: 1.0 / (N + 1),
            reciprocal_sum_exact=2.0,
            log_concave_from=2,
            log_concave_reason=(
                "s_n = n**2 exactly; (n**2+n-2)**2 <= (n**2+n)**2 for n >= 2"
            ),
            diagonal_sup=0.0,
            exact_compare=exact_compare,
        )
    rules = AnalyticRules(
        reciprocal_sum="convergent",
        reciprocal_sum_reason=(
            f"floor(n**{alpha:g}) >= n**{alpha:g}/2 once n**{alpha:g} >= 2, "
            f"so 1/a_n <= 2 n**-{alpha:g}, a convergent p-series"
        ),
        reciprocal_tail=_power_law_tail(alpha, max(2, math.ceil(2 ** (1 / alpha)))),
        diagonal_sup=0.0,
        exact_compare=exact_compare,
    )
    if float(alpha).is_integer():
        # floors are exact integer powers: log-concavity holds from n = 2
        rules = replace(
            rules,
            log_concave_from=2,
            log_concave_reason=(
                f"s_n = n**{int(alpha)} exactly; "
                "(n**2+n-2)**k <= (n**2+n)**k for n >= 2"
            ),
        )
    return rules


def power_jacobi(alpha: float) -> JacobiMatrix:
    """The smooth comparison matrix: a_n = sqrt(n**alpha (n+1)**alpha) for
    n >= 1 and a_0 = 1 (the value 0 at n = 0 would not be a valid Jacobi
    entry), with zero diagonal.

    Log-concavity holds exactly for n >= 2:
    (n**2-1)**(alpha/2) ((n+1)**2-1)**(alpha/2) <= n**alpha (n+1)**alpha.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")

    def a_block(n0: int, n1: int, _a=alpha) -> np.ndarray:
        n = np.arange(n0, n1, dtype=np.float64)
        base = np.where(n < 1, 1.0, n)
        return np.sqrt(base**_a * (n + 1.0) ** _a)

    if alpha <= 1:
        rules = AnalyticRules(
            reciprocal_sum="divergent",
            reciprocal_sum_reason=(
                f"a_n <= (n+1)**{alpha:g} <= n+1; harmonic comparison"
            ),
            diagonal_sup=0.0,
        )
    else:
        rules = AnalyticRules(
            reciprocal_sum="convergent",
            reciprocal_sum_reason=(
                f"1/a_n <= n**-{alpha:g} for n >= 1, a convergent p-series"
            ),
            reciprocal_tail=_power_law_tail(alpha, 1),
            log_concave_from=2,
            log_concave_reason=(
                "(n**2-1)((n+1)**2-1) <= (n**2+n)**2 raised to alpha/2, n >= 2"
            ),
            diagonal_sup=0.0,
        )
    return JacobiMatrix(
        a_block,
        None,
        rules=rules,
        provenance=("power_law", float(alpha)),
        name=f"power(alpha={alpha:g})",
    )


def free_jacobi() -> JacobiMatrix:
    """a_n = 1, b_n = 0: a bounded self-adjoint operator."""
    return JacobiMatrix(
        lambda n0, n1: np.ones(n1 - n0),
        None,
        rules=AnalyticRules(
            reciprocal_sum="divergent",
            reciprocal_sum_reason="a_n = 1, the sum is n_max + 1",
            diagonal_sup=0.0,
        ),
        name="free",
    )


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CriterionResult:
    """Outcome of an analytic criterion with its diagnostic payload."""

    criterion: str
    verdict: str  # "holds" | "fails" | "inconclusive"
    witness: dict

    def to_json_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "verdict": self.verdict,
            "witness": dict(self.witness),
        }


def carleman_test(
    J: JacobiMatrix,
    n_max: int = 1_000_000,
    divergence_threshold: float = 1e3,
) -> CriterionResult:
    """Divergence test for sum 1/a_n.

    "holds" means the sum diverges, hence essential self-adjointness.
    Decisive "fails" (convergence) comes only from a registered rule; a
    numeric partial sum can support "holds" once it crosses
    ``divergence_threshold``, but never "fails".
    """
    if n_max < 10:
        raise ValueError(f"n_max must be at least 10, got {n_max}")
    n_eval = n_max
    if J.max_index is not None:
        n_eval = min(n_eval, J.max_index)
    a = J.a_range(0, n_eval + 1)
    partial = float(np.sum(1.0 / a))
    witness: dict = {
        "partial_sum": partial,
        "n_scanned": n_eval,
        "threshold": divergence_threshold,
    }
    rule = J.rules.reciprocal_sum
    if rule == "divergent":
        witness["evidence"] = "rule"
        witness["rule"] = J.rules.reciprocal_sum_reason
        return CriterionResult("carleman", "holds", witness)
    if rule == "convergent":
        if partial >= divergence_threshold:
            raise InternalInconsistencyError(
                f"{J.name}: convergence rule registered but the partial sum "
                f"reached {partial:g} >= threshold {divergence_threshold:g}"
            )
        witness["evidence"] = "rule"
        witness["rule"] = J.rules.reciprocal_sum_reason
        if J.rules.reciprocal_tail is not None:
            tail = float(J.rules.reciprocal_tail(n_eval))
            witness["tail_bound"] = tail
            witness["sum_upper_bound"] = partial + tail
        if J.rules.reciprocal_sum_exact is not None:
            witness["sum_exact"] = J.rules.reciprocal_sum_exact
        return CriterionResult("carleman", "fails", witness)
    if partial >= divergence_threshold:
        witness["evidence"] = "numeric-threshold"
        return CriterionResult("carleman", "holds", witness)
    witness["evidence"] = None
    return CriterionResult("carleman", "inconclusive", witness)


def berezanskii_test(J: JacobiMatrix, n_max: int = 1_000_000) -> CriterionResult:
    """Eventual log-concavity of the off-diagonals plus bounded diagonal.

    Requires convergence of sum 1/a_n to be rule-certified (the numeric
    Carleman scan cannot establish it).  "holds" implies deficiency
    index 1.  Borderline float comparisons are escalated to the matrix's
    exact comparator; comparisons that stay unresolved count against
    certification but never produce a definite "fails".
    """
    if J.rules.reciprocal_sum != "convergent":
        raise ContractError(
            f"{J.name}: berezanskii_test needs rule-certified convergence of "
            "the reciprocal off-diagonal sum"
        )
    n_eval = n_max
    if J.max_index is not None:
        n_eval = min(n_eval, J.max_index)
    if n_eval < 4:
        raise ValueError("n_max too small for a log-concavity scan")

    a = J.a_range(0, n_eval + 1)
    # compare in log space: overflow-proof for fast-growing entries;
    # d > 0 means a_{n-1} a_{n+1} > a_n**2 at n = 1 .. n_eval-1
    la = np.log(a)
    d = la[:-2] + la[2:] - 2.0 * la[1:-1]
    # each log carries ~eps |log| error; everything inside the band goes
    # to the exact comparator
    margin = 1e-15 * (1.0 + np.abs(la[:-2]) + np.abs(la[2:]) + 2.0 * np.abs(la[1:-1]))
    definite_viol = d > margin
    borderline = np.abs(d) <= margin
    ambiguous: list[int] = []
    if borderline.any() and J.rules.exact_compare is not None:
        for i in np.nonzero(borderline)[0]:
            n = int(i) + 1
            try:
                sign = J.rules.exact_compare(n)
            except FloorBoundaryError:
                ambiguous.append(n)
                continue
            if sign > 0:
                definite_viol[i] = True
    elif borderline.any():
        ambiguous.extend(int(i) + 1 for i in np.nonzero(borderline)[0])

    viol_idx = np.nonzero(definite_viol)[0] + 1
    first_violation = int(viol_idx[0]) if viol_idx.size else None
    last_violation = int(viol_idx[-1]) if viol_idx.size else 0
    last_bad = max(last_violation, max(ambiguous, default=0))
    clean_tail = (n_eval - 1) - last_bad

    b = J.b_range(0, n_eval + 1)
    scanned_b_sup = float(np.max(np.abs(b))) if b.size else 0.0
    diag_certified = J.rules.diagonal_sup is not None
    diag_sup = J.rules.diagonal_sup if diag_certified else scanned_b_sup
    # heuristic growth flag: the scanned sup sits in the last decade
    b_arg = int(np.argmax(np.abs(b)))
    diag_suspect = (not diag_certified) and b_arg >= (9 * n_eval) // 10

    witness: dict = {
        "n_scanned": n_eval,
        "violations": int(viol_idx.size),
        "first_violation": first_violation,
        "last_violation": last_violation if viol_idx.size else None,
        "ambiguous": len(ambiguous),
        "diagonal_sup": float(diag_sup),
        "diagonal_certified": diag_certified,
    }

    if J.rules.log_concave_from is not None:
        n0 = J.rules.log_concave_from
        bad_beyond = viol_idx[viol_idx >= n0]
        if bad_beyond.size:
            raise InternalInconsistencyError(
                f"{J.name}: log-concavity certified from n0={n0} but the scan "
                f"found a violation at n={int(bad_beyond[0])}"
            )
        witness["n0"] = n0
        witness["evidence"] = "rule"
        witness["rule"] = J.rules.log_concave_reason
        return CriterionResult("berezanskii", "holds", witness)

    if viol_idx.size and last_violation >= n_eval - 100:
        witness["evidence"] = "scan"
        return CriterionResult("berezanskii", "fails", witness)
    if clean_tail >= 100 and not diag_suspect:
        witness["n0"] = last_bad + 1
        witness["evidence"] = "scan"
        return CriterionResult("berezanskii", "holds", witness)
    if diag_suspect:
        witness["diagonal_suspect_growth"] = True
    witness["evidence"] = None
    return CriterionResult("berezanskii", "inconclusive", witness)


# ---------------------------------------------------------------------------
# recurrence solver
# ---------------------------------------------------------------------------


@dataclass
class RecurrenceSolution:
    """Rescaled samples of a solution of (J - z) u = 0 on rows n >= 1.

    u_true(n) = values[n] * exp(log_scale[n]); log_psum[n] is the natural
    log of sum_{k<=n} |u_true(k)|**2.
    """

    z: complex
    init: tuple[complex, complex]
    values: np.ndarray
    log_scale: np.ndarray
    log_psum: np.ndarray

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def log10_abs(self) -> np.ndarray:
        """log10 |u_true(n)|; -inf where the value is exactly zero."""
        mag = np.abs(self.values)
        with np.errstate(divide="ignore"):
            return (np.log(mag) + self.log_scale) / _LN10

    def log10_partial_sums(self) -> np.ndarray:
        return self.log_psum / _LN10

    def true_value(self, n: int) -> complex:
        return complex(self.values[n]) * math.exp(float(self.log_scale[n]))


def solve_recurrence(
    J: JacobiMatrix,
    z: complex,
    init: tuple[complex, complex],
    n_max: int,
) -> RecurrenceSolution:
    """Forward three-term recurrence
    u(n+1) = ((z - b_n) u(n) - a_{n-1} u(n-1)) / a_n for 1 <= n < n_max,
    with per-index rescaling into [1e-150, 1e150] and log-space tracking
    of the square-sum."""
    u0, u1 = complex(init[0]), complex(init[1])
    if u0 == 0 and u1 == 0:
        raise ContractError("initial data (0, 0) generates the zero solution")
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    a = J.a_range(0, n_max)
    b = J.b_range(0, n_max)
    values, log_scale, log_psum = recurrence_trace(a, b, complex(z), u0, u1)
    return RecurrenceSolution(
        z=complex(z),
        init=(u0, u1),
        values=values,
        log_scale=log_scale,
        log_psum=log_psum,
    )


def wronskian(
    J: JacobiMatrix,
    u: RecurrenceSolution,
    v: RecurrenceSolution,
    n: int,
) -> complex:
    """a_n (u(n+1) v(n) - u(n) v(n+1)), with rescaling undone in log
    space.  Constant in n for exact solutions at the same z."""
    if u.z != v.z:
        raise ContractError(f"solutions have different z: {u.z} vs {v.z}")
    if n < 0 or n + 1 > u.n_max or n + 1 > v.n_max:
        raise ValueError(f"index {n} out of range for the stored solutions")
    e1 = float(u.log_scale[n + 1] + v.log_scale[n])
    e2 = float(u.log_scale[n] + v.log_scale[n + 1])
    t1 = complex(u.values[n + 1]) * complex(v.values[n])
    t2 = complex(u.values[n]) * complex(v.values[n + 1])
    if t1 == 0 and t2 == 0:
        return 0j
    m = max(e1 if t1 != 0 else -math.inf, e2 if t2 != 0 else -math.inf)
    bracket = t1 * math.exp(e1 - m) - t2 * math.exp(e2 - m)
    result = bracket * J.a(n)
    # peel the exponent off in safe chunks to avoid premature under/overflow
    while m > 500.0:
        result *= math.exp(500.0)
        m -= 500.0
    while m < -500.0:
        result *= math.exp(-500.0)
        m += 500.0
    return result * math.exp(m)


def relative_residuals(J: JacobiMatrix, sol: RecurrenceSolution) -> np.ndarray:
    """Residual of a_n u(n+1) + (b_n - z) u(n) + a_{n-1} u(n-1) = 0 at each
    interior n, relative to |a_n u(n+1)| + |z u(n)| + |a_{n-1} u(n-1)|,
    evaluated with the rescaling undone locally in log space."""
    n_max = sol.n_max
    a = J.a_range(0, n_max)
    b = J.b_range(0, n_max)
    vals = sol.values
    ls = sol.log_scale
    n = np.arange(1, n_max)
    m = np.maximum(np.maximum(ls[n - 1], ls[n]), ls[n + 1])
    f_prev = np.exp(ls[n - 1] - m)
    f_mid = np.exp(ls[n] - m)
    f_next = np.exp(ls[n + 1] - m)
    t_next = a[n] * vals[n + 1] * f_next
    t_mid = (b[n] - sol.z) * vals[n] * f_mid
    t_prev = a[n - 1] * vals[n - 1] * f_prev
    num = np.abs(t_next + t_mid + t_prev)
    den = (
        np.abs(t_next)
        + np.abs(sol.z) * np.abs(vals[n]) * f_mid
        + np.abs(t_prev)
    )
    out = np.zeros(n_max - 1)
    nz = den > 0
    out[nz] = num[nz] / den[nz]
    return out


# ---------------------------------------------------------------------------
# limit point / limit circle classifier
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassifierTolerances:
    """Decision thresholds for :func:`classify_limit`.

    ``divergence_factor``: partial sums growing by this factor between
    n_max/2 and n_max certify divergence outright.  ``tail_fraction``:
    a final-decade increment below this fraction of the total certifies
    convergence outright.  The decade-ratio thresholds handle the
    power-law middle ground: decade sums of a divergent square-sum grow
    at least like the index count (ratio 10 per decade at the critical
    exponent), while for a convergent one they decay; ratios between
    ``decay_ratio`` and ``growth_ratio`` are deliberately inconclusive.
    """

    tail_fraction: float = 1e-6
    divergence_factor: float = 1e6
    growth_ratio: float = 8.5
    decay_ratio: float = 0.8

    def to_json_dict(self) -> dict:
        return {
            "tail_fraction": self.tail_fraction,
            "divergence_factor": self.divergence_factor,
            "growth_ratio": self.growth_ratio,
            "decay_ratio": self.decay_ratio,
        }


@dataclass(frozen=True)
class ClassifierResult:
    verdict: str  # "limit_point" | "limit_circle" | "inconclusive"
    diagnostics: dict

    def to_json_dict(self) -> dict:
        return {"verdict": self.verdict, "diagnostics": dict(self.diagnostics)}


def _log_sub_exp(x: float, y: float) -> float:
    """log(exp(x) - exp(y)) for x >= y; -inf when they coincide."""
    if y == -math.inf:
        return x
    d = y - x
    if d >= -1e-15:
        return -math.inf
    return x + math.log1p(-math.exp(d))


def _solution_stats(lp: np.ndarray, n_max: int, tol: ClassifierTolerances) -> dict:
    cps = [max(1, n_max // 1000), n_max // 100, n_max // 10, n_max]
    logp = [float(lp[c]) for c in cps]
    d0 = _log_sub_exp(logp[1], logp[0])
    d1 = _log_sub_exp(logp[2], logp[1])
    d2 = _log_sub_exp(logp[3], logp[2])
    if d1 == -math.inf or d0 == -math.inf:
        rho_prev = -math.inf
    else:
        rho_prev = (d1 - d0) / _LN10
    if d2 == -math.inf or d1 == -math.inf:
        rho_last = -math.inf
    else:
        rho_last = (d2 - d1) / _LN10
    half_gap = float(lp[n_max] - lp[n_max // 2])
    tail_frac_log = (d2 - float(lp[n_max])) / _LN10 if d2 != -math.inf else -math.inf

    if half_gap >= math.log(tol.divergence_factor):
        verdict, fired = "diverges", "divergence_factor"
    elif tail_frac_log <= math.log10(tol.tail_fraction):
        verdict, fired = "converges", "tail_fraction"
    elif min(rho_prev, rho_last) >= math.log10(tol.growth_ratio):
        verdict, fired = "diverges", "decade_growth"
    elif max(rho_prev, rho_last) <= math.log10(tol.decay_ratio):
        verdict, fired = "converges", "decade_decay"
    else:
        verdict, fired = "unclear", None
    return {
        "checkpoints": cps,
        "log10_partial_sums": [x / _LN10 for x in logp],
        "decade_ratio_log10": [rho_prev, rho_last],
        "half_gap_log10": half_gap / _LN10,
        "tail_fraction_log10": tail_frac_log,
        "verdict": verdict,
        "fired_rule": fired,
    }


def classify_limit(
    J: JacobiMatrix,
    n_max: int = 10_000,
    tol: Optional[ClassifierTolerances] = None,
    z: complex = 1j,
) -> ClassifierResult:
    """Numerical limit-point / limit-circle decision at z (default i).

    Integrates two independent solutions (inits (1,0) and (0,1), which
    span the solution space of the rows n >= 1).  All solutions square-
    summable means limit circle (index 1); a divergent square-sum for any
    of them means limit point (index 0).  Forward recursion keeps the
    dominant solution, so divergence is detected on the dominant one and
    convergence of the dominant one bounds every solution.
    """
    if n_max < 1000:
        raise ValueError(f"n_max must be at least 1000, got {n_max}")
    tol = tol or ClassifierTolerances()
    stats = []
    for init in ((1.0 + 0j, 0j), (0j, 1.0 + 0j)):
        sol = solve_recurrence(J, z, init, n_max)
        stats.append(_solution_stats(sol.log_psum, n_max, tol))
    verdicts = [s["verdict"] for s in stats]
    if "diverges" in verdicts:
        verdict = "limit_point"
    elif all(v == "converges" for v in verdicts):
        verdict = "limit_circle"
    else:
        verdict = "inconclusive"
    diagnostics = {
        "z": [float(np.real(z)), float(np.imag(z))],
        "n_max": n_max,
        "tolerances": tol.to_json_dict(),
        "solutions": stats,
        "kernel_backend": KERNEL_BACKEND,
    }
    return ClassifierResult(verdict=verdict, diagnostics=diagnostics)


# ---------------------------------------------------------------------------
# bounded perturbations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PerturbationBound:
    """Scanned and, when available, certified bounds on the entrywise
    difference of two Jacobi matrices.

    ``sup_estimate`` is the scanned sup of max(|da_n|, |db_n|).  The
    relative bound constants refer to |T f| <= relative_a |S f| +
    relative_b |f|; a bounded entrywise difference gives relative_a = 0
    and relative_b <= 2 sup|da| + sup|db|.  ``certified`` marks the cases
    where a registered pair rule bounds the unscanned tail."""

    sup_estimate: float
    relative_a: float
    relative_b: float
    scanned_up_to: int
    certified: bool = False
    certified_tail: Optional[float] = None
    sup_da: float = 0.0
    sup_db: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "sup_estimate": self.sup_estimate,
            "relative_a": self.relative_a,
            "relative_b": self.relative_b,
            "scanned_up_to": self.scanned_up_to,
            "certified": self.certified,
            "certified_tail": self.certified_tail,
            "sup_da": self.sup_da,
            "sup_db": self.sup_db,
        }


def _floor_vs_power_tail(alpha: float, N: int) -> float:
    """Certified bound on sqrt(n**a (n+1)**a) - sqrt(s_n s_{n+1}) for all
    n > N >= 2.

    With A = n**a, B = (n+1)**a and s_n >= A - 1:
    diff = (A B - s_n s_{n+1}) / (power + floor entry)
         <= (A + B - 1) / (sqrt(AB) + sqrt((A-1)(B-1)))
         <= cosh(log rho) + 1 / (2 sqrt((A-1)(B-1))),
    rho**2 = (B-1)/(A-1) <= ((n+1)/n)**a * A/(A-1), all decreasing in n.
    """
    if N < 2:
        raise ValueError("tail bound valid only for N >= 2")
    A = float(N) ** alpha
    if A <= 1.0:
        raise ValueError("need N**alpha > 1")
    R = math.sqrt(((N + 1) / N) ** alpha * A / (A - 1.0))
    return 0.5 * (R + 1.0 / R) + 0.5 / (A - 1.0)


def bounded_difference(
    J1: JacobiMatrix,
    J2: JacobiMatrix,
    n_max: int = 1_000_000,
) -> PerturbationBound:
    """Entrywise difference scan with a certified tail when the pair
    carries a registered provenance rule (floor-power antitree matrix vs
    its smooth power-law comparison at the same exponent)."""
    n_eval = n_max
    for J in (J1, J2):
        if J.max_index is not None:
            n_eval = min(n_eval, J.max_index)
    da = sup_da = 0.0
    db = 0.0
    block = 1 << 16
    for n0 in range(0, n_eval + 1, block):
        n1 = min(n0 + block, n_eval + 1)
        da = max(da, float(np.max(np.abs(J1.a_range(n0, n1) - J2.a_range(n0, n1)))))
        db = max(db, float(np.max(np.abs(J1.b_range(n0, n1) - J2.b_range(n0, n1)))))
    sup_da, sup_db = da, db

    certified = False
    certified_tail = None
    provs = {J1.provenance, J2.provenance}
    kinds = {p[0] for p in provs if p}
    alphas = {p[1] for p in provs if p}
    if (
        kinds == {"antitree_floor", "power_law"}
        and len(alphas) == 1
        and n_eval >= 2
    ):
        alpha = alphas.pop()
        certified_tail = _floor_vs_power_tail(alpha, n_eval)
        certified = True

    sup_est = max(sup_da, sup_db)
    sup_global_a = max(sup_da, certified_tail) if certified else sup_da
    return PerturbationBound(
        sup_estimate=sup_est,
        relative_a=0.0,
        relative_b=2.0 * sup_global_a + sup_db,
        scanned_up_to=n_eval,
        certified=certified,
        certified_tail=certified_tail,
        sup_da=sup_da,
        sup_db=sup_db,
    )
