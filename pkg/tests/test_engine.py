"""Composed deficiency-index verdicts and their traces."""

import math

import numpy as np
import pytest

from defindex import (
    AnalysisSettings,
    AntitreeDesc,
    AntitreeSpec,
    DeficiencyReport,
    DisjointUnionDesc,
    FiniteGraphDesc,
    GluedDesc,
    Graph,
    JacobiDesc,
    JacobiMatrix,
    TraceEntry,
    TreeDesc,
    analyze,
    build_antitree,
    direct_sum_index,
    free_jacobi,
    power_jacobi,
)
from defindex import jsonio

FAST = AnalysisSettings(scan_n_max=100_000, trace_n_max=2000)


def _antitree(alpha):
    return AntitreeDesc(AntitreeSpec.power_law(alpha, 8))


# -- single descriptors ------------------------------------------------------


def test_finite_graph_is_zero():
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])
    r = analyze(FiniteGraphDesc(g))
    assert r.eta == 0
    assert r.trace[0].rule == "finite-graph"


def test_finite_graph_rejects_boundary():
    g = build_antitree(AntitreeSpec.explicit((1, 2)))
    with pytest.raises(ValueError):
        FiniteGraphDesc(g)


def test_antitree_alpha_2_is_one():
    r = analyze(_antitree(2.0), FAST)
    assert r.eta == 1
    rules = [t.rule for t in r.trace]
    assert "antitree-radial-reduction" in rules
    assert "berezanskii-log-concave" in rules


def test_antitree_alpha_half_is_zero():
    r = analyze(_antitree(0.5), FAST)
    assert r.eta == 0
    assert any(t.rule == "carleman-divergent" for t in r.trace)


def test_explicit_antitree_is_finite_hence_zero():
    r = analyze(AntitreeDesc(AntitreeSpec.explicit((1, 2, 3))))
    assert r.eta == 0
    assert r.trace[0].rule == "finite-graph"


def test_raw_jacobi_free_matrix():
    r = analyze(JacobiDesc(free_jacobi()), FAST)
    assert r.eta == 0


def test_raw_jacobi_without_rules_uses_classifier():
    J = JacobiMatrix(
        lambda n0, n1: (np.arange(n0, n1, dtype=float) + 1.0) ** 2,
        name="bare-square",
    )
    r = analyze(JacobiDesc(J), FAST)
    assert r.eta == 1
    assert any(t.rule == "numerical-limit_circle" for t in r.trace)


def test_raw_jacobi_finite_data_undetermined():
    J = JacobiMatrix.from_sequences(np.ones(50))
    r = analyze(JacobiDesc(J), FAST)
    assert r.eta is None  # too short for any route


# -- gluing and sums ---------------------------------------------------------


@pytest.mark.parametrize("copies", [1, 2, 3, 4, 5])
def test_glued_antitree_alpha_2(copies):
    r = analyze(GluedDesc(_antitree(2.0), copies), FAST)
    assert r.eta == copies


def test_glued_alpha_1_stays_zero():
    r = analyze(GluedDesc(_antitree(1.0), 7), FAST)
    assert r.eta == 0


def test_glued_requires_connected_base():
    parts = DisjointUnionDesc((_antitree(2.0), _antitree(2.0)))
    with pytest.raises(ValueError):
        analyze(GluedDesc(parts, 2), FAST)


def test_disjoint_union_adds():
    r = analyze(DisjointUnionDesc((_antitree(2.0), _antitree(2.0), _antitree(1.0))), FAST)
    assert r.eta == 2


def test_direct_sum_index_examples():
    one = DeficiencyReport(eta=1, trace=[TraceEntry("t", "r", "eta=1")])
    zero = DeficiencyReport(eta=0, trace=[])
    inf_r = DeficiencyReport(eta=math.inf, trace=[])
    assert direct_sum_index([one, one, one]).eta == 3
    assert direct_sum_index([zero, zero]).eta == 0
    assert direct_sum_index([inf_r, one]).eta == math.inf


def test_direct_sum_undetermined_propagates():
    und = DeficiencyReport(eta=None, trace=[])
    one = DeficiencyReport(eta=1, trace=[])
    r = direct_sum_index([one, und])
    assert r.eta is None
    assert r.trace[-1].verdict == "undetermined"


# -- trees -------------------------------------------------------------------


def test_finite_tree_is_zero():
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])
    r = analyze(TreeDesc(g))
    assert r.eta == 0
    assert r.trace[0].rule == "tree-alternative"


def test_truncated_tree_is_undetermined():
    # path truncation open at one end: the infinite tree's index is 0 or
    # infinite, and the engine never claims a finite nonzero value
    g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)], boundary=[4])
    r = analyze(TreeDesc(g))
    assert r.eta is None
    assert r.diagnostics["answer_set"] == [0, "infinity"]


@pytest.mark.parametrize(
    "edges,boundary",
    [
        ([(0, 1), (1, 2), (2, 3), (3, 4)], [4]),
        ([(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)], [4, 5]),
        ([(0, 1), (1, 2), (2, 3)], []),
    ],
)
def test_tree_rule_never_finite_nonzero(edges, boundary):
    g = Graph(1 + max(max(e) for e in edges), edges, boundary=boundary)
    r = analyze(TreeDesc(g))
    assert r.eta is None or r.eta == 0


def test_tree_desc_rejects_cycles():
    g = Graph(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(ValueError):
        analyze(TreeDesc(g))


# -- determinism and soundness -----------------------------------------------


def test_analyze_deterministic():
    r1 = analyze(_antitree(1.5), FAST)
    r2 = analyze(_antitree(1.5), FAST)
    assert jsonio.dumps(r1.to_json_dict()) == jsonio.dumps(r2.to_json_dict())


def test_rule_soundness_across_grid():
    # whenever the classifier is decisive, it agrees with the analytic eta
    for alpha in (0.5, 0.8, 1.0, 1.3, 1.5, 2.0, 3.0):
        r = analyze(_antitree(alpha), FAST)
        assert r.eta == (0 if alpha <= 1 else 1)
        verdict = r.diagnostics.get("classifier", {}).get("verdict")
        if verdict == "limit_point":
            assert r.eta == 0
        elif verdict == "limit_circle":
            assert r.eta == 1


def test_report_json_shape():
    r = analyze(_antitree(2.0), FAST)
    d = r.to_json_dict()
    assert d["eta"] == 1
    assert isinstance(d["trace"], list)
    for entry in d["trace"]:
        assert set(entry) == {"rule", "paper_ref", "verdict", "params"}
    text = jsonio.dumps(d)
    assert '"eta": 1' in text


def test_trace_entry_evidence_distinguishes_exact():
    r = analyze(GluedDesc(_antitree(2.0), 3), FAST)
    kinds = {t.params.get("evidence") for t in r.trace}
    assert "exact" in kinds


def test_settings_roundtrip_in_report():
    s = AnalysisSettings(scan_n_max=50_000, trace_n_max=1500)
    d = s.to_json_dict()
    assert d["scan_n_max"] == 50_000
    assert d["tolerances"]["growth_ratio"] == 8.5
