"""Adjacency and Laplacian action on finitely supported functions.

Boundary policy: applying an operator to a function supported on boundary
vertices is an error, never a silent zero-extension, because the missing
neighbours would make the result depend on vertices outside the
truncation.  Function values are complex; matrices stay real.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import TruncationError
from .graphs import Graph


@dataclass
class FiniteFunction:
    """Finitely supported complex function on vertices; absent = 0."""

    values: dict[int, complex] = field(default_factory=dict)

    @classmethod
    def indicator(cls, v: int) -> "FiniteFunction":
        return cls({v: 1.0 + 0j})

    @classmethod
    def from_items(cls, items) -> "FiniteFunction":
        return cls({int(v): complex(x) for v, x in dict(items).items() if x != 0})

    def __getitem__(self, v: int) -> complex:
        return self.values.get(v, 0j)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(v for v, x in self.values.items() if x != 0)

    def inner(self, other: "FiniteFunction") -> complex:
        """<f, g> = sum conj(f(v)) g(v)."""
        keys = self.support & other.support
        return sum(self[v].conjugate() * other[v] for v in keys)

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(x) ** 2 for x in self.values.values())))

    def sup_norm(self) -> float:
        return max((abs(x) for x in self.values.values()), default=0.0)


def _check_support(g: Graph, f: FiniteFunction, op_name: str):
    bad = f.support & g.boundary
    if bad:
        raise TruncationError(
            f"{op_name}: support touches boundary vertices {sorted(bad)}; "
            "the result is not determined by the truncation",
            vertices=bad,
        )


def apply_adjacency(g: Graph, f: FiniteFunction) -> FiniteFunction:
    """(Af)(x) = sum of f over the neighbours of x."""
    _check_support(g, f, "apply_adjacency")
    out: dict[int, complex] = {}
    for v, x in f.values.items():
        if x == 0:
            continue
        for w in g.neighbors(v):
            out[w] = out.get(w, 0j) + x
    return FiniteFunction({v: x for v, x in out.items() if x != 0})


def apply_laplacian(g: Graph, f: FiniteFunction) -> FiniteFunction:
    """(Lf)(x) = deg(x) f(x) - (Af)(x), the physical graph Laplacian."""
    _check_support(g, f, "apply_laplacian")
    af = apply_adjacency(g, f)
    out: dict[int, complex] = dict()
    for v in f.support | af.support:
        val = g.degree(v) * f[v] - af[v]
        if val != 0:
            out[v] = val
    return FiniteFunction(out)


@dataclass
class SparseSymmetricMatrix:
    """Upper-triangle sparse storage: entries[(r, c)] with r <= c, no zeros."""

    dimension: int
    entries: dict[tuple[int, int], float] = field(default_factory=dict)

    def get(self, i: int, j: int) -> float:
        if i > j:
            i, j = j, i
        return self.entries.get((i, j), 0.0)

    def set(self, i: int, j: int, value: float):
        if i > j:
            i, j = j, i
        if value == 0.0:
            self.entries.pop((i, j), None)
        else:
            self.entries[(i, j)] = float(value)

    def to_dense(self) -> np.ndarray:
        m = np.zeros((self.dimension, self.dimension))
        for (i, j), v in self.entries.items():
            m[i, j] = v
            m[j, i] = v
        return m

    def to_coordinate_text(self) -> str:
        """One "row col value" triple per line, 0-based, row <= col, sorted."""
        lines = [
            f"{i} {j} {v:.17g}" for (i, j), v in sorted(self.entries.items())
        ]
        return "\n".join(lines) + ("\n" if lines else "")


def truncated_matrix(g: Graph, operator: str = "adjacency") -> SparseSymmetricMatrix:
    """Matrix of the chosen operator on the whole truncation.

    Rows at boundary vertices reflect only the materialised edges; they
    agree with apply_* away from the boundary.
    """
    m = SparseSymmetricMatrix(g.vertex_count)
    if operator == "adjacency":
        for u, v in g.edges():
            m.set(u, v, 1.0)
    elif operator == "laplacian":
        for u, v in g.edges():
            m.set(u, v, -1.0)
        for v in range(g.vertex_count):
            d = g.degree(v)
            if d:
                m.set(v, v, float(d))
    else:
        raise ValueError(f"unknown operator {operator!r}")
    return m
