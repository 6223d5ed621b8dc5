"""Deficiency-index verdicts with a provenance trace.

The analyzer composes, in priority order: the finite-dimension rule, the
antitree radial reduction followed by the Carleman / Berezanskii criteria,
bounded-difference invariance against the smooth power-law comparison
matrix, direct-sum additivity, the glued-copies rule, the tree
alternative, and finally the numerical limit-point / limit-circle
classifier.  Every fired rule appends a trace entry naming the classical
result it rests on.  The adjacency matrix commutes with complex
conjugation, so the two deficiency indices coincide and one value eta is
reported.

The classifier always runs alongside a decisive analytic verdict as a
cross-check; a decisive disagreement raises InternalInconsistencyError
rather than being resolved silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import InternalInconsistencyError
from .graphs import AntitreeSpec, Graph, is_connected, tree_check
from .jacobi import (
    ClassifierTolerances,
    JacobiMatrix,
    berezanskii_test,
    bounded_difference,
    carleman_test,
    classify_limit,
    power_jacobi,
)
from .radial import reduce_to_jacobi

INFINITE = math.inf


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteGraphDesc:
    graph: Graph

    def __post_init__(self):
        if self.graph.boundary:
            raise ValueError(
                "finite_graph requires an empty boundary: a truncation with "
                "incomplete neighbourhoods does not describe a whole operator"
            )


@dataclass(frozen=True)
class AntitreeDesc:
    spec: AntitreeSpec


@dataclass(frozen=True)
class GluedDesc:
    base: "OperatorDescriptor"
    copies: int

    def __post_init__(self):
        if self.copies < 1:
            raise ValueError(f"copies must be positive, got {self.copies}")


@dataclass(frozen=True)
class DisjointUnionDesc:
    parts: tuple["OperatorDescriptor", ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("disjoint union needs at least one part")


@dataclass(frozen=True)
class TreeDesc:
    graph: Graph


@dataclass(frozen=True)
class JacobiDesc:
    matrix: JacobiMatrix


OperatorDescriptor = Union[
    FiniteGraphDesc, AntitreeDesc, GluedDesc, DisjointUnionDesc, TreeDesc, JacobiDesc
]


def _describes_connected_graph(d: OperatorDescriptor) -> bool:
    if isinstance(d, AntitreeDesc):
        return True
    if isinstance(d, FiniteGraphDesc):
        return is_connected(d.graph)
    if isinstance(d, TreeDesc):
        return is_connected(d.graph)
    if isinstance(d, GluedDesc):
        return _describes_connected_graph(d.base)
    return False


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    paper_ref: str
    verdict: str
    params: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "rule": self.rule,
            "paper_ref": self.paper_ref,
            "verdict": self.verdict,
            "params": dict(self.params),
        }


@dataclass
class DeficiencyReport:
    """eta is a non-negative int, math.inf, or None for undetermined.
    The trace records every fired rule in order; diagnostics carry the
    criterion results and classifier output that back the verdict."""

    eta: Optional[float]
    trace: list[TraceEntry]
    diagnostics: dict = field(default_factory=dict)

    @property
    def decisive(self) -> bool:
        return self.eta is not None

    def eta_json(self):
        if self.eta is None:
            return "undetermined"
        if self.eta == INFINITE:
            return "infinity"
        return int(self.eta)

    def to_json_dict(self) -> dict:
        return {
            "eta": self.eta_json(),
            "trace": [t.to_json_dict() for t in self.trace],
            "diagnostics": dict(self.diagnostics),
        }


@dataclass(frozen=True)
class AnalysisSettings:
    """Numerical effort knobs: scan_n_max bounds scalar scans (reciprocal
    sums, log-concavity), trace_n_max bounds solution traces."""

    scan_n_max: int = 1_000_000
    trace_n_max: int = 10_000
    carleman_threshold: float = 1e3
    tolerances: ClassifierTolerances = field(default_factory=ClassifierTolerances)

    def to_json_dict(self) -> dict:
        return {
            "scan_n_max": self.scan_n_max,
            "trace_n_max": self.trace_n_max,
            "carleman_threshold": self.carleman_threshold,
            "tolerances": self.tolerances.to_json_dict(),
        }


_REF_FINITE = "finite symmetric matrices are self-adjoint"
_REF_RADIAL = (
    "sphere-averaging reduction of a radially symmetric adjacency matrix "
    "to a weighted Jacobi matrix"
)
_REF_CARLEMAN = "Carleman criterion: divergent reciprocal off-diagonal sum"
_REF_BEREZANSKII = (
    "Berezanskii criterion: convergent reciprocal sum, eventually "
    "log-concave off-diagonals, bounded diagonal"
)
_REF_KATO_RELLICH = (
    "Kato-Rellich stability of deficiency indices under relatively bounded "
    "perturbations"
)
_REF_WEYL = "Weyl alternative: limit point (index 0) / limit circle (index 1)"
_REF_DIRECT_SUM = "deficiency indices are additive over direct sums"
_REF_TREE = "tree alternative: the index of a tree adjacency matrix is 0 or infinite"


# ---------------------------------------------------------------------------
# the jacobi pipeline
# ---------------------------------------------------------------------------


def _classifier_eta(verdict: str) -> Optional[int]:
    return {"limit_point": 0, "limit_circle": 1}.get(verdict)


def _jacobi_pipeline(
    J: JacobiMatrix,
    settings: AnalysisSettings,
    trace: list[TraceEntry],
    diagnostics: dict,
    alpha: Optional[float] = None,
) -> Optional[int]:
    """Carleman, then Berezanskii, then (for floor power-law matrices)
    bounded-difference invariance against the smooth comparison matrix,
    with the numerical classifier as an independent cross-check.  Returns
    eta or None."""
    eta: Optional[int] = None

    car = carleman_test(J, settings.scan_n_max, settings.carleman_threshold)
    diagnostics["carleman"] = car.to_json_dict()
    if car.verdict == "holds":
        trace.append(
            TraceEntry(
                "carleman-divergent",
                _REF_CARLEMAN,
                "eta=0",
                {"evidence": car.witness.get("evidence"), "matrix": J.name},
            )
        )
        eta = 0
    elif car.verdict == "fails":
        trace.append(
            TraceEntry(
                "carleman-convergent",
                _REF_CARLEMAN,
                "reciprocal sum converges; not decisive alone",
                {"evidence": car.witness.get("evidence"), "matrix": J.name},
            )
        )
        ber = berezanskii_test(J, settings.scan_n_max)
        diagnostics["berezanskii"] = ber.to_json_dict()
        if ber.verdict == "holds":
            trace.append(
                TraceEntry(
                    "berezanskii-log-concave",
                    _REF_BEREZANSKII,
                    "eta=1",
                    {
                        "n0": ber.witness.get("n0"),
                        "evidence": ber.witness.get("evidence"),
                        "matrix": J.name,
                    },
                )
            )
            eta = 1
        elif alpha is not None and alpha > 1:
            # floor jitter can defeat the direct scan; compare with the
            # smooth power-law matrix, whose criteria are certified
            Jx = power_jacobi(alpha)
            pb = bounded_difference(J, Jx, min(settings.scan_n_max, 100_000))
            diagnostics["bounded_difference"] = pb.to_json_dict()
            if pb.certified:
                carx = carleman_test(
                    Jx, settings.scan_n_max, settings.carleman_threshold
                )
                berx = berezanskii_test(Jx, settings.scan_n_max)
                diagnostics["carleman_comparison"] = carx.to_json_dict()
                diagnostics["berezanskii_comparison"] = berx.to_json_dict()
                if carx.verdict == "fails" and berx.verdict == "holds":
                    trace.append(
                        TraceEntry(
                            "bounded-difference-invariance",
                            _REF_KATO_RELLICH,
                            "index transferred",
                            {
                                "sup_estimate": pb.sup_estimate,
                                "certified_tail": pb.certified_tail,
                                "comparison": Jx.name,
                            },
                        )
                    )
                    trace.append(
                        TraceEntry(
                            "berezanskii-log-concave",
                            _REF_BEREZANSKII,
                            "eta=1",
                            {
                                "n0": berx.witness.get("n0"),
                                "evidence": berx.witness.get("evidence"),
                                "matrix": Jx.name,
                            },
                        )
                    )
                    eta = 1

    classifier = None
    if J.max_index is None or J.max_index + 1 >= settings.trace_n_max:
        classifier = classify_limit(
            J, settings.trace_n_max, settings.tolerances
        )
        diagnostics["classifier"] = classifier.to_json_dict()
        c_eta = _classifier_eta(classifier.verdict)
        if eta is not None and c_eta is not None and c_eta != eta:
            raise InternalInconsistencyError(
                f"{J.name}: analytic route gives eta={eta} but the "
                f"classifier reports {classifier.verdict}"
            )
        if eta is None and c_eta is not None:
            trace.append(
                TraceEntry(
                    f"numerical-{classifier.verdict}",
                    _REF_WEYL,
                    f"eta={c_eta}",
                    {"n_max": settings.trace_n_max, "matrix": J.name},
                )
            )
            eta = c_eta
    return eta


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------


def analyze(
    d: OperatorDescriptor,
    settings: Optional[AnalysisSettings] = None,
) -> DeficiencyReport:
    """Deficiency index of the adjacency-type operator described by d.

    Deterministic: identical descriptors and settings produce identical
    reports, traces included."""
    settings = settings or AnalysisSettings()

    if isinstance(d, FiniteGraphDesc):
        trace = [
            TraceEntry(
                "finite-graph",
                _REF_FINITE,
                "eta=0",
                {"vertices": d.graph.vertex_count, "evidence": "exact"},
            )
        ]
        return DeficiencyReport(eta=0, trace=trace)

    if isinstance(d, AntitreeDesc):
        return _analyze_antitree(d.spec, settings)

    if isinstance(d, GluedDesc):
        if not _describes_connected_graph(d.base):
            raise ValueError("glued base must describe a connected graph")
        base = analyze(d.base, settings)
        trace = list(base.trace)
        if base.eta is None:
            trace.append(
                TraceEntry(
                    "glued-copies",
                    _REF_KATO_RELLICH,
                    "undetermined",
                    {"copies": d.copies},
                )
            )
            return DeficiencyReport(
                eta=None, trace=trace, diagnostics={"base": base.diagnostics}
            )
        eta = d.copies * base.eta if base.eta != INFINITE else INFINITE
        trace.append(
            TraceEntry(
                "direct-sum-additivity",
                _REF_DIRECT_SUM,
                f"eta={d.copies} x {int(base.eta) if base.eta != INFINITE else 'infinity'}",
                {"copies": d.copies, "evidence": "exact"},
            )
        )
        trace.append(
            TraceEntry(
                "glued-copies",
                _REF_KATO_RELLICH,
                "index unchanged by the connecting edges",
                {
                    "copies": d.copies,
                    "added_edges": d.copies - 1,
                    "perturbation": "finite rank, hence bounded",
                },
            )
        )
        return DeficiencyReport(
            eta=eta, trace=trace, diagnostics={"base": base.diagnostics}
        )

    if isinstance(d, DisjointUnionDesc):
        reports = [analyze(p, settings) for p in d.parts]
        return direct_sum_index(reports)

    if isinstance(d, TreeDesc):
        check = tree_check(d.graph)
        if not check.is_tree:
            raise ValueError(f"tree descriptor on a non-tree graph: {check.reason}")
        if not d.graph.boundary:
            trace = [
                TraceEntry(
                    "tree-alternative",
                    _REF_TREE,
                    "answer set {0, infinity}",
                    {"evidence": "exact"},
                ),
                TraceEntry(
                    "finite-graph",
                    _REF_FINITE,
                    "eta=0",
                    {"vertices": d.graph.vertex_count, "evidence": "exact"},
                ),
            ]
            return DeficiencyReport(eta=0, trace=trace)
        trace = [
            TraceEntry(
                "tree-alternative",
                _REF_TREE,
                "answer set {0, infinity}; no desk-scale certificate "
                "distinguishes them",
                {"evidence": "exact"},
            )
        ]
        return DeficiencyReport(
            eta=None,
            trace=trace,
            diagnostics={"answer_set": [0, "infinity"]},
        )

    if isinstance(d, JacobiDesc):
        trace: list[TraceEntry] = []
        diagnostics: dict = {}
        eta = _jacobi_pipeline(d.matrix, settings, trace, diagnostics)
        if eta is None:
            trace.append(
                TraceEntry(
                    "undetermined",
                    _REF_WEYL,
                    "no decisive analytic rule and the classifier is "
                    "inconclusive",
                    {},
                )
            )
        return DeficiencyReport(eta=eta, trace=trace, diagnostics=diagnostics)

    raise TypeError(f"unknown descriptor {d!r}")


def _analyze_antitree(
    spec: AntitreeSpec, settings: AnalysisSettings
) -> DeficiencyReport:
    if not spec.unbounded:
        # explicit sizes describe a finite antitree: a bounded operator
        trace = [
            TraceEntry(
                "finite-graph",
                _REF_FINITE,
                "eta=0",
                {
                    "vertices": int(sum(spec.sizes[: spec.depth + 1])),
                    "spheres": spec.depth + 1,
                    "evidence": "exact",
                },
            )
        ]
        return DeficiencyReport(eta=0, trace=trace)

    trace = [
        TraceEntry(
            "antitree-radial-reduction",
            _REF_RADIAL,
            "reduced to a Jacobi matrix; the complementary zero block "
            "contributes 0",
            {"alpha": spec.alpha, "off_diagonal": "sqrt(s_n s_{n+1})"},
        )
    ]
    diagnostics: dict = {}
    J = reduce_to_jacobi(spec)
    eta = _jacobi_pipeline(J, settings, trace, diagnostics, alpha=spec.alpha)
    if eta is None:
        trace.append(
            TraceEntry(
                "undetermined",
                _REF_WEYL,
                "no decisive analytic rule and the classifier is inconclusive",
                {},
            )
        )
    return DeficiencyReport(eta=eta, trace=trace, diagnostics=diagnostics)


def direct_sum_index(reports: list[DeficiencyReport]) -> DeficiencyReport:
    """eta of a direct sum: the sum of the component indices, with
    infinity absorbing.  Any undetermined component makes the sum
    undetermined."""
    trace: list[TraceEntry] = []
    diagnostics: dict = {"components": [r.diagnostics for r in reports]}
    for i, r in enumerate(reports):
        for entry in r.trace:
            params = dict(entry.params)
            params["component"] = i
            trace.append(
                TraceEntry(entry.rule, entry.paper_ref, entry.verdict, params)
            )
    undetermined = [i for i, r in enumerate(reports) if r.eta is None]
    if undetermined:
        trace.append(
            TraceEntry(
                "direct-sum-additivity",
                _REF_DIRECT_SUM,
                "undetermined",
                {"undetermined_components": undetermined},
            )
        )
        return DeficiencyReport(eta=None, trace=trace, diagnostics=diagnostics)
    total: float = 0
    for r in reports:
        total = INFINITE if (r.eta == INFINITE or total == INFINITE) else total + r.eta
    trace.append(
        TraceEntry(
            "direct-sum-additivity",
            _REF_DIRECT_SUM,
            f"eta={'infinity' if total == INFINITE else int(total)}",
            {"components": len(reports), "evidence": "exact"},
        )
    )
    return DeficiencyReport(eta=total, trace=trace, diagnostics=diagnostics)


# ---------------------------------------------------------------------------
# JSON descriptor parsing (CLI file format)
# ---------------------------------------------------------------------------


def descriptor_from_json(d: dict) -> OperatorDescriptor:
    """Parse {"kind": ...} descriptor documents.

    Kinds: antitree {alpha | sizes, depth?}, finite_graph {graph},
    tree {graph}, glued {base, copies}, disjoint_union {parts},
    jacobi {a, b?} with explicit entry lists."""
    kind = d.get("kind")
    if kind == "antitree":
        if "alpha" in d:
            spec = AntitreeSpec.power_law(float(d["alpha"]), int(d.get("depth", 8)))
        else:
            spec = AntitreeSpec.explicit(
                [int(s) for s in d["sizes"]],
                int(d["depth"]) if "depth" in d else None,
            )
        return AntitreeDesc(spec)
    if kind == "finite_graph":
        return FiniteGraphDesc(Graph.from_json_dict(d["graph"]))
    if kind == "tree":
        return TreeDesc(Graph.from_json_dict(d["graph"]))
    if kind == "glued":
        return GluedDesc(descriptor_from_json(d["base"]), int(d["copies"]))
    if kind == "disjoint_union":
        return DisjointUnionDesc(
            tuple(descriptor_from_json(p) for p in d["parts"])
        )
    if kind == "jacobi":
        return JacobiDesc(
            JacobiMatrix.from_sequences(
                [float(x) for x in d["a"]],
                [float(x) for x in d["b"]] if d.get("b") is not None else None,
            )
        )
    raise ValueError(f"unknown descriptor kind {kind!r}")
