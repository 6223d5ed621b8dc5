"""Finite truncations of locally finite simple graphs.

A :class:`Graph` is always finite; infinite graphs are represented by a
truncation together with a ``boundary`` set marking the vertices whose
neighbour lists may be incomplete.  Every downstream operation states how
it treats boundary vertices.

Antitrees are built from an :class:`AntitreeSpec`: a rule producing the
sphere sizes s_n, either the power law s_0 = 1, s_n = floor(n**alpha), or
an explicit finite list.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from . import floorpow

Label = tuple[int, int, int]  # (copy index, sphere index, index within sphere)


def sphere_sizes(alpha: float, n_max: int) -> tuple[int, ...]:
    """Exact sphere sizes (s_0, ..., s_n_max) for the power law.

    s_0 = 1 and s_n = floor(n**alpha) for n >= 1.  Raises on alpha <= 0 and
    propagates FloorBoundaryError when a floor is not trustworthy.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if n_max < 0:
        raise ValueError(f"n_max must be non-negative, got {n_max}")
    return tuple(
        1 if n == 0 else floorpow.floor_power(n, alpha) for n in range(n_max + 1)
    )


@dataclass(frozen=True)
class AntitreeSpec:
    """Sphere-size rule plus the number of spheres to materialise.

    ``depth`` is the largest sphere radius built, so ``depth + 1`` spheres
    S_0 .. S_depth exist in the materialised graph.
    """

    alpha: Optional[float]
    sizes: Optional[tuple[int, ...]]
    depth: int

    def __post_init__(self):
        if (self.alpha is None) == (self.sizes is None):
            raise ValueError("exactly one of alpha / sizes must be given")
        if self.depth < 1:
            raise ValueError(f"depth must be positive, got {self.depth}")
        if self.alpha is not None and self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.sizes is not None:
            if len(self.sizes) < self.depth + 1:
                raise ValueError(
                    f"need at least depth+1 = {self.depth + 1} sizes, "
                    f"got {len(self.sizes)}"
                )
            if self.sizes[0] != 1:
                raise ValueError("sizes[0] must be 1 (single root)")
            if any(s < 1 for s in self.sizes):
                raise ValueError("all sphere sizes must be >= 1")

    @classmethod
    def power_law(cls, alpha: float, depth: int) -> "AntitreeSpec":
        return cls(alpha=float(alpha), sizes=None, depth=depth)

    @classmethod
    def explicit(cls, sizes: Sequence[int], depth: Optional[int] = None) -> "AntitreeSpec":
        sizes = tuple(int(s) for s in sizes)
        if depth is None:
            depth = len(sizes) - 1
        return cls(alpha=None, sizes=sizes, depth=depth)

    @property
    def unbounded(self) -> bool:
        """True when the rule extends past the materialised depth."""
        return self.alpha is not None

    @property
    def max_sphere_index(self) -> Optional[int]:
        """Largest n with s_n defined, or None for the power law."""
        return None if self.sizes is None else len(self.sizes) - 1

    def sphere_size(self, n: int) -> int:
        """Exact s_n."""
        if n < 0:
            raise ValueError(f"sphere index must be non-negative, got {n}")
        if self.sizes is not None:
            if n >= len(self.sizes):
                raise ValueError(
                    f"sphere {n} not defined by explicit sizes of length {len(self.sizes)}"
                )
            return self.sizes[n]
        return 1 if n == 0 else floorpow.floor_power(n, self.alpha)

    def sphere_sizes_exact(self, n_max: int) -> tuple[int, ...]:
        return tuple(self.sphere_size(n) for n in range(n_max + 1))

    def sphere_sizes_f64(self, n0: int, n1: int) -> np.ndarray:
        """float64 images of s_n for n in [n0, n1), for bulk numerics."""
        if self.sizes is not None:
            if n1 > len(self.sizes):
                raise ValueError(
                    f"sphere range [{n0}, {n1}) exceeds explicit sizes "
                    f"of length {len(self.sizes)}"
                )
            return np.asarray(self.sizes[n0:n1], dtype=np.float64)
        out = floorpow.floor_power_f64(self.alpha, n0, n1)
        if n0 == 0 and out.size:
            out[0] = 1.0
        return out


class Graph:
    """Immutable simple undirected graph on vertices 0 .. vertex_count-1.

    ``boundary`` holds vertices whose neighbour lists may be truncated.
    ``labels`` optionally maps a vertex to (copy, sphere, index in sphere).
    Adjacency lists are sorted; iteration order is deterministic.
    """

    __slots__ = ("vertex_count", "_adj", "boundary", "labels")

    def __init__(
        self,
        vertex_count: int,
        edges: Iterable[tuple[int, int]],
        boundary: Iterable[int] = (),
        labels: Optional[Mapping[int, Label]] = None,
    ):
        if vertex_count < 0:
            raise ValueError("vertex_count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(vertex_count)]
        for u, v in edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise ValueError(f"self-loop at vertex {u} not allowed")
            adj[u].add(v)
            adj[v].add(u)
        self.vertex_count = vertex_count
        self._adj = tuple(tuple(sorted(s)) for s in adj)
        self.boundary = frozenset(boundary)
        for v in self.boundary:
            if not 0 <= v < vertex_count:
                raise ValueError(f"boundary vertex {v} out of range")
        self.labels = dict(labels) if labels is not None else None

    # -- interrogation ----------------------------------------------------

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return self._adj[v]

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return v in self._adj[u]

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (u, v) with u < v, sorted lexicographically."""
        return [(u, v) for u in range(self.vertex_count) for v in self._adj[u] if u < v]

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self._adj) // 2

    def _check_vertex(self, v: int):
        if not 0 <= v < self.vertex_count:
            raise ValueError(f"vertex {v} out of range [0, {self.vertex_count})")

    def without_boundary(self) -> "Graph":
        """The same graph reinterpreted as complete (empty boundary)."""
        return Graph(self.vertex_count, self.edges(), (), self.labels)

    # -- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        d: dict = {
            "vertex_count": self.vertex_count,
            "edges": [list(e) for e in self.edges()],
            "boundary": sorted(self.boundary),
        }
        if self.labels is not None:
            d["labels"] = {str(v): list(self.labels[v]) for v in sorted(self.labels)}
        return d

    @classmethod
    def from_json_dict(cls, d: Mapping) -> "Graph":
        labels = None
        if "labels" in d and d["labels"] is not None:
            labels = {int(k): tuple(v) for k, v in d["labels"].items()}
        return cls(
            int(d["vertex_count"]),
            [(int(u), int(v)) for u, v in d.get("edges", [])],
            [int(b) for b in d.get("boundary", [])],
            labels,
        )


@dataclass(frozen=True)
class SphereDecomposition:
    """BFS spheres around a root: spheres[n] holds the vertices at
    distance n, sorted.  Unreachable vertices are reported, never dropped."""

    root: int
    spheres: tuple[tuple[int, ...], ...]
    unreachable: tuple[int, ...] = ()
    _radius: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for n, sph in enumerate(self.spheres):
            for v in sph:
                self._radius[v] = n

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.spheres)

    def radius_of(self, v: int) -> int:
        """Graph distance of v from the root; raises for unreachable v."""
        try:
            return self._radius[v]
        except KeyError:
            raise ValueError(f"vertex {v} is not reachable from root {self.root}")


def build_antitree(spec: AntitreeSpec) -> Graph:
    """Materialise spheres S_0 .. S_depth with complete bipartite edges
    between consecutive spheres.  The outermost sphere is the boundary.

    Vertices are numbered sphere by sphere, root = 0; labels record
    (copy=0, sphere, index within sphere).
    """
    sizes = spec.sphere_sizes_exact(spec.depth)
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    total = offsets[-1]
    edges = []
    for n in range(spec.depth):
        for u in range(offsets[n], offsets[n + 1]):
            for v in range(offsets[n + 1], offsets[n + 2]):
                edges.append((u, v))
    labels = {}
    for n, s in enumerate(sizes):
        for i in range(s):
            labels[offsets[n] + i] = (0, n, i)
    boundary = range(offsets[spec.depth], total)
    return Graph(total, edges, boundary, labels)


def bfs_spheres(g: Graph, root: int) -> SphereDecomposition:
    """Sphere decomposition by BFS distance from root."""
    g._check_vertex(root)
    dist = {root: 0}
    spheres: list[list[int]] = [[root]]
    frontier = deque([root])
    while frontier:
        nxt: list[int] = []
        for _ in range(len(frontier)):
            u = frontier.popleft()
            for w in g.neighbors(u):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        if nxt:
            spheres.append(sorted(nxt))
            frontier.extend(sorted(nxt))
    unreachable = tuple(v for v in range(g.vertex_count) if v not in dist)
    return SphereDecomposition(
        root=root,
        spheres=tuple(tuple(s) for s in spheres),
        unreachable=unreachable,
    )


def is_connected(g: Graph) -> bool:
    if g.vertex_count == 0:
        return True
    return not bfs_spheres(g, 0).unreachable


def glue_copies(g: Graph, n: int, v0: int) -> Graph:
    """n labelled copies of g in a row, copy i joined to copy i+1 by an
    edge between the two images of v0."""
    if n < 1:
        raise ValueError(f"need at least one copy, got {n}")
    g._check_vertex(v0)
    size = g.vertex_count
    base_edges = g.edges()
    edges = []
    for i in range(n):
        off = i * size
        edges.extend((u + off, v + off) for u, v in base_edges)
    for i in range(n - 1):
        edges.append((i * size + v0, (i + 1) * size + v0))
    boundary = [i * size + b for i in range(n) for b in g.boundary]
    labels = None
    if g.labels is not None:
        ncopies = 1 + max(lbl[0] for lbl in g.labels.values())
        labels = {}
        for i in range(n):
            for v, (c, sph, idx) in g.labels.items():
                labels[i * size + v] = (i * ncopies + c, sph, idx)
    return Graph(n * size, edges, boundary, labels)


@dataclass(frozen=True)
class TreeCheck:
    """Result of the tree test with a diagnostic reason."""

    is_tree: bool
    connected: bool
    vertex_count: int
    edge_count: int
    reason: str


def tree_check(g: Graph) -> TreeCheck:
    """Connected and edge_count == vertex_count - 1, which on finite
    graphs is equivalent to every edge being a bridge."""
    connected = is_connected(g)
    e, v = g.edge_count, g.vertex_count
    if not connected:
        return TreeCheck(False, False, v, e, "graph is disconnected")
    if e != v - 1:
        return TreeCheck(
            False, True, v, e, f"edge count {e} != vertex count - 1 = {v - 1}"
        )
    return TreeCheck(True, True, v, e, "connected with |E| = |V| - 1")


def is_tree(g: Graph) -> bool:
    return tree_check(g).is_tree


def degree(g: Graph, v: int) -> int:
    """Neighbour count of v within the truncation."""
    return g.degree(v)
