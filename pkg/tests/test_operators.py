"""Adjacency / Laplacian application and truncated matrices."""

import numpy as np
import pytest

from defindex import (
    AntitreeSpec,
    FiniteFunction,
    Graph,
    TruncationError,
    apply_adjacency,
    apply_laplacian,
    build_antitree,
    truncated_matrix,
)


def _antitree_123():
    return build_antitree(AntitreeSpec.explicit((1, 2, 3)))


def test_adjacency_of_root_indicator():
    g = _antitree_123()
    af = apply_adjacency(g, FiniteFunction.indicator(0))
    assert af.values == {1: 1 + 0j, 2: 1 + 0j}


def test_adjacency_of_zero():
    g = _antitree_123()
    assert apply_adjacency(g, FiniteFunction()).values == {}


def test_adjacency_of_constant_on_s1():
    # f = 1 on S_1 = {1, 2}: (Af)(root) = 2, (Af) = 2 on S_2, 0 on S_1
    g = _antitree_123()
    f = FiniteFunction({1: 1 + 0j, 2: 1 + 0j})
    af = apply_adjacency(g, f)
    assert af[0] == 2
    for v in (3, 4, 5):
        assert af[v] == 2
    for v in (1, 2):
        assert af[v] == 0


def test_adjacency_rejects_boundary_support():
    g = _antitree_123()
    with pytest.raises(TruncationError) as err:
        apply_adjacency(g, FiniteFunction.indicator(4))
    assert 4 in err.value.vertices


def test_laplacian_of_constant_is_zero():
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])  # whole graph, no boundary
    f = FiniteFunction({v: 1 + 0j for v in range(4)})
    assert apply_laplacian(g, f).values == {}


def test_laplacian_of_indicator():
    g = Graph(4, [(0, 1), (0, 2), (0, 3)])  # star, deg(0) = 3
    lf = apply_laplacian(g, FiniteFunction.indicator(0))
    assert lf[0] == 3
    for v in (1, 2, 3):
        assert lf[v] == -1


def test_laplacian_identity_random():
    g = _antitree_123()
    rng = np.random.default_rng(3)
    for _ in range(10):
        f = FiniteFunction(
            {v: complex(rng.standard_normal(), rng.standard_normal()) for v in range(3)}
        )
        af = apply_adjacency(g, f)
        lf = apply_laplacian(g, f)
        for v in range(g.vertex_count):
            assert lf[v] + af[v] == pytest.approx(g.degree(v) * f[v], abs=1e-12)


def test_adjacency_symmetric_bilinear_form():
    g = build_antitree(AntitreeSpec.power_law(2, 4))
    interior = [v for v in range(g.vertex_count) if v not in g.boundary]
    rng = np.random.default_rng(5)
    for _ in range(10):
        f = FiniteFunction(
            {v: complex(rng.standard_normal(), rng.standard_normal()) for v in interior}
        )
        h = FiniteFunction(
            {v: complex(rng.standard_normal(), rng.standard_normal()) for v in interior}
        )
        lhs = apply_adjacency(g, f).inner(h)
        rhs = f.inner(apply_adjacency(g, h))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_truncated_adjacency_small():
    g = build_antitree(AntitreeSpec.explicit((1, 2)))
    m = truncated_matrix(g, "adjacency").to_dense()
    expect = np.array([[0, 1, 1], [1, 0, 0], [1, 0, 0]], dtype=float)
    assert np.array_equal(m, expect)


def test_truncated_single_vertex():
    m = truncated_matrix(Graph(1, []), "adjacency")
    assert m.dimension == 1
    assert m.entries == {}


def test_truncated_row_sums_are_degrees():
    g = _antitree_123()
    m = truncated_matrix(g, "adjacency").to_dense()
    for v in range(g.vertex_count):
        assert m[v].sum() == g.degree(v)


def test_truncated_matrix_matches_apply_on_interior():
    g = _antitree_123()
    m = truncated_matrix(g, "adjacency").to_dense()
    for v in range(g.vertex_count):
        if v in g.boundary:
            continue
        af = apply_adjacency(g, FiniteFunction.indicator(v))
        col = np.array([af[w].real for w in range(g.vertex_count)])
        assert np.array_equal(m[:, v], col)


def test_truncated_laplacian():
    g = Graph(3, [(0, 1), (1, 2)])
    m = truncated_matrix(g, "laplacian").to_dense()
    expect = np.array([[1, -1, 0], [-1, 2, -1], [0, -1, 1]], dtype=float)
    assert np.array_equal(m, expect)


def test_coordinate_export_format():
    g = Graph(3, [(0, 2), (0, 1)])
    text = truncated_matrix(g, "adjacency").to_coordinate_text()
    assert text == "0 1 1\n0 2 1\n"


def test_unknown_operator_rejected():
    with pytest.raises(ValueError):
        truncated_matrix(Graph(1, []), "resolvent")
