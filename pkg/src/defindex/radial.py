"""Sphere averaging and the reduction of antitree adjacency to a Jacobi
matrix.

For an antitree with sphere sizes s_n, the averaging projection P maps
onto radially symmetric functions; the adjacency action there becomes

    (A f~)(n) = s_{n-1} f~(n-1) + s_{n+1} f~(n+1),   s_{-1} = 0,

and conjugating with the weight unitary (U f~)(n) = sqrt(s_n) f~(n) turns
this into the Jacobi matrix with zero diagonal and off-diagonal
a_n = sqrt(s_n s_{n+1}).  The orthogonal complement of the radial
subspace carries the zero operator and contributes nothing to the
deficiency indices.

:func:`check_reduction_consistency` verifies the whole chain numerically
against direct graph-side adjacency application.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ReductionInconsistencyError
from .graphs import AntitreeSpec, Graph, SphereDecomposition, bfs_spheres, build_antitree
from .jacobi import JacobiMatrix, floor_power_rules
from .operators import FiniteFunction, apply_adjacency


@dataclass
class RadialFunction:
    """A radially symmetric function via its per-radius values f~(n) and
    the sphere-size weights s_n; the weighted square norm is
    sum s_n |f~(n)|**2."""

    values: np.ndarray  # complex, indexed by radius
    weights: np.ndarray  # s_n, same length

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if self.values.shape != self.weights.shape:
            raise ValueError("values and weights must have equal length")

    def weighted_norm(self) -> float:
        return float(np.sqrt(np.sum(self.weights * np.abs(self.values) ** 2)))


def project_radial(decomp: SphereDecomposition, f: FiniteFunction) -> FiniteFunction:
    """(Pf)(x) = average of f over the sphere containing x.

    Idempotent and self-adjoint.  Support must lie inside the decomposed
    component."""
    for v in f.support:
        decomp.radius_of(v)  # raises for unreachable support
    out: dict[int, complex] = {}
    for n, sphere in enumerate(decomp.spheres):
        total = sum(f[v] for v in sphere)
        if total == 0:
            continue
        avg = total / len(sphere)
        for v in sphere:
            out[v] = avg
    return FiniteFunction(out)


def radial_profile(
    decomp: SphereDecomposition,
    f: FiniteFunction,
    check_tol: Optional[float] = 0.0,
) -> RadialFunction:
    """Extract f~(n) from a radially symmetric f; validates constancy on
    each sphere to within check_tol (absolute) unless check_tol is None."""
    n_spheres = len(decomp.spheres)
    values = np.zeros(n_spheres, dtype=np.complex128)
    for v in f.support:
        decomp.radius_of(v)
    for n, sphere in enumerate(decomp.spheres):
        vals = [f[v] for v in sphere]
        values[n] = sum(vals) / len(vals)
        if check_tol is not None:
            spread = max(abs(x - values[n]) for x in vals)
            if spread > check_tol:
                raise ValueError(
                    f"function is not radially symmetric: spread {spread:g} "
                    f"on sphere {n}"
                )
    weights = np.array([len(s) for s in decomp.spheres], dtype=np.float64)
    return RadialFunction(values=values, weights=weights)


def weight_transform(rf: RadialFunction) -> np.ndarray:
    """(U f~)(n) = sqrt(s_n) f~(n); isometric from the weighted norm to
    the plain square norm."""
    return np.sqrt(rf.weights) * rf.values


def reduce_to_jacobi(spec: AntitreeSpec) -> JacobiMatrix:
    """Jacobi matrix of the radial part: b_n = 0 and
    a_n = sqrt(s_n s_{n+1}).

    Power-law specs yield a matrix evaluable at every index, with the
    analytic rule registry attached; explicit specs yield a matrix
    bounded by the listed sizes."""

    def a_block(n0: int, n1: int) -> np.ndarray:
        s_lo = spec.sphere_sizes_f64(n0, n1)
        s_hi = spec.sphere_sizes_f64(n0 + 1, n1 + 1)
        return np.sqrt(s_lo * s_hi)

    if spec.unbounded:
        return JacobiMatrix(
            a_block,
            None,
            rules=floor_power_rules(spec.alpha),
            provenance=("antitree_floor", float(spec.alpha)),
            name=f"antitree(alpha={spec.alpha:g})",
        )
    return JacobiMatrix(
        a_block,
        None,
        max_index=spec.max_sphere_index - 1,
        name="antitree(explicit)",
    )


@dataclass(frozen=True)
class ReductionCheckReport:
    """Outcome of the reduction consistency check; deviations are sup-norm
    differences normalised by the sup-norm of the trial input."""

    max_deviation: float
    trials: int
    seed: int
    depth: int
    failing_identity: Optional[str]
    per_identity: dict

    def to_json_dict(self) -> dict:
        d: dict = {
            "max_deviation": self.max_deviation,
            "trials": self.trials,
            "seed": self.seed,
            "depth": self.depth,
        }
        if self.failing_identity is not None:
            d["failing_identity"] = self.failing_identity
        d["per_identity"] = dict(self.per_identity)
        return d


def _sup(arr: np.ndarray) -> float:
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def check_reduction_consistency(
    spec: AntitreeSpec,
    depth: int,
    trials: int,
    tol: float,
    seed: int = 0,
    jacobi: Optional[JacobiMatrix] = None,
) -> ReductionCheckReport:
    """Verify, on random finitely supported functions, that

    1. "projection_commutes": P A f = A P f,
    2. "radial_invariance":   A P f = P A P f,
    3. "sphere_recursion":    (A Pf)~(n) = s_{n-1} Pf~(n-1) + s_{n+1} Pf~(n+1),
    4. "jacobi_conjugation":  U (A Pf)~ = J (U Pf~),

    all on radii <= depth-2 (the two outermost spheres are distorted by
    the truncation).  Trial 0 is the deterministic unit-weight radial
    probe f~(n) = 1/sqrt(s_n); the rest draw unit-normal real and
    imaginary parts on radii <= depth-3 from the given seed.

    Raises ReductionInconsistencyError when the largest normalised
    deviation exceeds tol.  Pass ``jacobi`` to check a different reduced
    matrix (fault injection)."""
    if depth < 3:
        raise ValueError(f"depth must be at least 3, got {depth}")
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")

    if spec.unbounded:
        spec_at_depth = AntitreeSpec.power_law(spec.alpha, depth)
    else:
        spec_at_depth = AntitreeSpec.explicit(spec.sizes, depth)
    g = build_antitree(spec_at_depth)
    decomp = bfs_spheres(g, 0)
    sizes = np.array(decomp.sizes, dtype=np.float64)
    J = jacobi if jacobi is not None else reduce_to_jacobi(spec_at_depth)
    a = J.a_range(0, depth - 1)  # a_0 .. a_{depth-2}

    safe_vertices = [
        v for n in range(depth - 2) for v in decomp.spheres[n]
    ]  # support radii <= depth-3
    n_check = depth - 2  # radii 0 .. depth-2 are compared

    rng = np.random.default_rng(seed)
    per_identity = {
        "projection_commutes": 0.0,
        "radial_invariance": 0.0,
        "sphere_recursion": 0.0,
        "jacobi_conjugation": 0.0,
    }

    for t in range(trials):
        if t == 0:
            # deterministic probe: w = U f~ identically one
            probe = 1.0 / np.sqrt(sizes[: depth - 2])
            f = FiniteFunction(
                {
                    v: complex(probe[decomp.radius_of(v)])
                    for v in safe_vertices
                }
            )
        else:
            re = rng.standard_normal(len(safe_vertices))
            im = rng.standard_normal(len(safe_vertices))
            f = FiniteFunction(
                {v: complex(re[i], im[i]) for i, v in enumerate(safe_vertices)}
            )
        scale = max(f.sup_norm(), 1e-300)

        pf = project_radial(decomp, f)
        af = apply_adjacency(g, f)
        apf = apply_adjacency(g, pf)
        paf = project_radial(decomp, af)
        papf = project_radial(decomp, apf)

        check_vertices = [
            v for n in range(n_check + 1) for v in decomp.spheres[n]
        ]
        dev_commute = max(
            (abs(paf[v] - apf[v]) for v in check_vertices), default=0.0
        ) / scale
        dev_invariance = max(
            (abs(apf[v] - papf[v]) for v in check_vertices), default=0.0
        ) / scale

        pf_t = radial_profile(decomp, pf, check_tol=None).values
        apf_t = radial_profile(decomp, papf, check_tol=None).values
        shifted = np.zeros(n_check + 1, dtype=np.complex128)
        for n in range(n_check + 1):
            lo = sizes[n - 1] * pf_t[n - 1] if n >= 1 else 0.0
            hi = sizes[n + 1] * pf_t[n + 1] if n + 1 < len(pf_t) else 0.0
            shifted[n] = lo + hi
        dev_recursion = _sup(apf_t[: n_check + 1] - shifted) / scale

        w = np.sqrt(sizes) * pf_t  # U applied to Pf~
        jw = np.zeros(n_check + 1, dtype=np.complex128)
        for n in range(n_check + 1):
            lo = a[n - 1] * w[n - 1] if n >= 1 else 0.0
            hi = a[n] * w[n + 1] if n + 1 < len(w) else 0.0
            jw[n] = lo + hi
        u_apf = np.sqrt(sizes[: n_check + 1]) * apf_t[: n_check + 1]
        dev_conjugation = _sup(u_apf - jw) / scale

        per_identity["projection_commutes"] = max(
            per_identity["projection_commutes"], dev_commute
        )
        per_identity["radial_invariance"] = max(
            per_identity["radial_invariance"], dev_invariance
        )
        per_identity["sphere_recursion"] = max(
            per_identity["sphere_recursion"], dev_recursion
        )
        per_identity["jacobi_conjugation"] = max(
            per_identity["jacobi_conjugation"], dev_conjugation
        )

    max_dev = max(per_identity.values())
    failing = None
    if max_dev > tol:
        failing = max(per_identity, key=per_identity.get)
    report = ReductionCheckReport(
        max_deviation=max_dev,
        trials=trials,
        seed=seed,
        depth=depth,
        failing_identity=failing,
        per_identity=per_identity,
    )
    if failing is not None:
        raise ReductionInconsistencyError(
            f"reduction check failed: identity {failing!r} deviates by "
            f"{max_dev:g} > tol {tol:g}",
            report=report,
        )
    return report
