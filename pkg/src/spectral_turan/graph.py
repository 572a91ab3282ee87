"""Simple undirected graphs, extremal templates and edit bookkeeping.

Vertices are dense integers ``0..n-1``.  A :class:`Graph` never changes after
construction; every operation that "modifies" a graph returns a new one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

Edge = tuple[int, int]


class GraphError(ValueError):
    """Invalid graph data (self-loop, duplicate edge, bad vertex, bad delta)."""


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...]
    labels: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphError("vertex count must be nonnegative")
        seen: set[Edge] = set()
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={self.n}")
            e = norm_edge(u, v)
            if e in seen:
                raise GraphError(f"duplicate edge {e}")
            seen.add(e)
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        if self.labels is not None and len(self.labels) != self.n:
            raise GraphError("label map length must equal n")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], labels=None) -> "Graph":
        return cls(n, tuple((int(u), int(v)) for u, v in edges), labels)

    @classmethod
    def from_adjacency(cls, a: np.ndarray) -> "Graph":
        a = np.asarray(a)
        if a.shape[0] != a.shape[1] or not np.array_equal(a, a.T):
            raise GraphError("adjacency matrix must be square and symmetric")
        if np.any(np.diag(a)):
            raise GraphError("adjacency matrix has a nonzero diagonal")
        iu, ju = np.nonzero(np.triu(a, 1))
        return cls(a.shape[0], tuple(zip(iu.tolist(), ju.tolist())))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Sorted neighbor lists."""
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(a)) for a in nbrs)

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.adjacency)

    @cached_property
    def bitsets(self) -> tuple[int, ...]:
        out = []
        for a in self.adjacency:
            b = 0
            for v in a:
                b |= 1 << v
            out.append(b)
        return tuple(out)

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            d[u] += 1
            d[v] += 1
        d.setflags(write=False)
        return d

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self.edge_set

    def adjacency_matrix(self, dtype=np.float64) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=dtype)
        if self.edges:
            e = np.array(self.edges)
            a[e[:, 0], e[:, 1]] = 1
            a[e[:, 1], e[:, 0]] = 1
        return a

    @cached_property
    def csr(self) -> sparse.csr_matrix:
        if not self.edges:
            return sparse.csr_matrix((self.n, self.n))
        e = np.array(self.edges)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        data = np.ones(len(rows))
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def isolated_vertices(self) -> list[int]:
        return [v for v in range(self.n) if not self.adjacency[v]]

    def strip_isolated(self) -> tuple["Graph", list[int]]:
        """Drop isolated vertices; returns the graph and new->old vertex map."""
        keep = [v for v in range(self.n) if self.adjacency[v]]
        idx = {v: i for i, v in enumerate(keep)}
        return Graph(len(keep), tuple((idx[u], idx[v]) for u, v in self.edges)), keep

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        keep = sorted(set(vertices))
        idx = {v: i for i, v in enumerate(keep)}
        sub = tuple((idx[u], idx[v]) for u, v in self.edges if u in idx and v in idx)
        return Graph(len(keep), sub), keep

    def remove_edges(self, edges: Iterable[Edge]) -> "Graph":
        drop = {norm_edge(*e) for e in edges}
        return Graph(self.n, tuple(e for e in self.edges if e not in drop), self.labels)

    def add_edges(self, edges: Iterable[Edge]) -> "Graph":
        return Graph(self.n, self.edges + tuple(norm_edge(*e) for e in edges), self.labels)

    def disjoint_union(self, other: "Graph") -> "Graph":
        k = self.n
        return Graph(k + other.n, self.edges + tuple((u + k, v + k) for u, v in other.edges))

    def non_edges(self) -> list[Edge]:
        es = self.edge_set
        return [p for p in itertools.combinations(range(self.n), 2) if p not in es]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class VertexPartition:
    """Disjoint vertex parts; ``covered`` may be a strict subset of V."""

    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        parts = tuple(tuple(sorted(int(v) for v in p)) for p in self.parts)
        seen: set[int] = set()
        for p in parts:
            for v in p:
                if v in seen:
                    raise GraphError(f"vertex {v} appears in two parts")
                seen.add(v)
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: Iterable[int]) -> "VertexPartition":
        return cls(tuple(tuple(p) for p in parts))

    @classmethod
    def from_labels(cls, labels: Sequence[int], r: int | None = None) -> "VertexPartition":
        """Build from a label array; negative labels mean 'not covered'."""
        k = r if r is not None else (max(labels) + 1 if len(labels) else 0)
        parts: list[list[int]] = [[] for _ in range(k)]
        for v, lab in enumerate(labels):
            if lab >= 0:
                parts[lab].append(v)
        return cls(tuple(tuple(p) for p in parts))

    @property
    def covered(self) -> frozenset[int]:
        return frozenset(v for p in self.parts for v in p)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parts)

    @property
    def r(self) -> int:
        return len(self.parts)

    @property
    def balanced(self) -> bool:
        s = self.sizes
        return not s or max(s) - min(s) <= 1

    def labels(self, n: int) -> np.ndarray:
        lab = np.full(n, -1, dtype=np.int64)
        for i, p in enumerate(self.parts):
            for v in p:
                if v >= n:
                    raise GraphError(f"part vertex {v} outside graph with n={n}")
                lab[v] = i
        return lab


@dataclass(frozen=True)
class GraphDelta:
    added: frozenset[Edge] = frozenset()
    removed: frozenset[Edge] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "added", frozenset(norm_edge(*e) for e in self.added))
        object.__setattr__(self, "removed", frozenset(norm_edge(*e) for e in self.removed))
        if self.added & self.removed:
            raise GraphError("an edge cannot be both added and removed")

    @property
    def count(self) -> int:
        return len(self.added) + len(self.removed)

    def inverse(self) -> "GraphDelta":
        return GraphDelta(added=self.removed, removed=self.added)


def apply_delta(g: Graph, delta: GraphDelta) -> Graph:
    es = g.edge_set
    missing = [e for e in delta.removed if e not in es]
    if missing:
        raise GraphError(f"cannot remove absent edge {sorted(missing)[0]}")
    present = [e for e in delta.added if e in es]
    if present:
        raise GraphError(f"cannot add present edge {sorted(present)[0]}")
    kept = tuple(e for e in g.edges if e not in delta.removed)
    return Graph(g.n, kept + tuple(sorted(delta.added)), g.labels)


# --- generators -------------------------------------------------------------


def complete_multipartite(sizes: Sequence[int]) -> tuple[Graph, VertexPartition]:
    parts, start = [], 0
    for s in sizes:
        parts.append(tuple(range(start, start + s)))
        start += s
    edges = [
        (u, v)
        for i, j in itertools.combinations(range(len(parts)), 2)
        for u in parts[i]
        for v in parts[j]
    ]
    return Graph.from_edges(start, edges), VertexPartition(tuple(parts))


def turan_part_sizes(n: int, r: int) -> list[int]:
    q, rem = divmod(n, r)
    return [q + 1] * rem + [q] * (r - rem)


def gen_turan(n: int, r: int) -> tuple[Graph, VertexPartition]:
    """Balanced complete r-partite graph T(n, r); larger parts come first."""
    if r < 2:
        raise GraphError("r must be at least 2")
    if r > n:
        raise GraphError(f"r={r} exceeds n={n}")
    return complete_multipartite(turan_part_sizes(n, r))


def turan_edge_count(n: int, r: int) -> int:
    s = turan_part_sizes(n, r)
    return (n * n - sum(x * x for x in s)) // 2


def gen_complete_bipartite(a: int, b: int) -> tuple[Graph, VertexPartition]:
    if a < 1 or b < 1:
        raise GraphError("both sides of a biclique need at least one vertex")
    return complete_multipartite([a, b])


def gen_complete(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def gen_path(n: int) -> Graph:
    """Path on n vertices (n-1 edges)."""
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def gen_empty(n: int) -> Graph:
    return Graph(n, ())


def gen_star(k: int) -> Graph:
    return gen_complete_bipartite(1, k)[0]


def gen_wheel(k: int) -> Graph:
    """Hub 0 joined to a k-cycle on 1..k."""
    rim = [(1 + i, 1 + (i + 1) % k) for i in range(k)]
    return Graph.from_edges(k + 1, rim + [(0, i) for i in range(1, k + 1)])


def gen_petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def join(g: Graph, h: Graph) -> Graph:
    """Join: disjoint union plus every edge between the two vertex sets."""
    u = g.disjoint_union(h)
    cross = [(i, g.n + j) for i in range(g.n) for j in range(h.n)]
    return u.add_edges(cross)


def gen_book(k: int) -> Graph:
    """K_2 joined with an independent set of size k (k triangles on a spine)."""
    return join(gen_complete(2), gen_empty(k))


def gen_gnp(n: int, p: float, seed: int) -> Graph:
    """Binomial random graph; identical seed gives the identical graph."""
    if not 0.0 <= p <= 1.0:
        raise GraphError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    return Graph.from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()))


# --- edit distance ----------------------------------------------------------


def template_edges(partition: VertexPartition) -> set[Edge]:
    out: set[Edge] = set()
    for i, j in itertools.combinations(range(partition.r), 2):
        for u in partition.parts[i]:
            for v in partition.parts[j]:
                out.add(norm_edge(u, v))
    return out


def edit_count_labels(g: Graph, labels: np.ndarray) -> int:
    """Deviation of g from the complete multipartite graph given by labels.

    A label of -1 marks an uncovered vertex; all of its edges are deviations.
    """
    if g.m:
        e = np.asarray(g.edges)
        lu, lv = labels[e[:, 0]], labels[e[:, 1]]
        bad = (lu < 0) | (lv < 0) | (lu == lv)
        wrong_edges = int(bad.sum())
        cross_present = g.m - wrong_edges
    else:
        wrong_edges = cross_present = 0
    sizes = np.bincount(labels[labels >= 0]) if np.any(labels >= 0) else np.zeros(0, int)
    total = int(sizes.sum())
    cross_pairs = (total * total - int((sizes * sizes).sum())) // 2
    return wrong_edges + cross_pairs - cross_present


def edit_distance_template(g: Graph, template: VertexPartition) -> tuple[int, GraphDelta]:
    """Edits turning g into the complete multipartite graph on ``template``.

    Edges at vertices outside the covered set count as deviations.
    """
    lab = template.labels(g.n)
    removed = {e for e in g.edges if lab[e[0]] < 0 or lab[e[1]] < 0 or lab[e[0]] == lab[e[1]]}
    added = template_edges(template) - g.edge_set
    delta = GraphDelta(frozenset(added), frozenset(removed))
    return delta.count, delta
