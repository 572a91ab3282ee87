"""Perron-Frobenius eigenpairs, Rayleigh quotients and exact walk counts."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components

from .graph import Graph, GraphError, VertexPartition

DEFAULT_TOL = 1e-10
WALK_ELL_CAP = 12
_INT64_SAFE = 2**62


@dataclass(frozen=True)
class PerronData:
    lam: float
    x: np.ndarray
    residual: float
    iterations: int
    component_id: int
    converged: bool = True
    tie: bool = False
    tol: float = DEFAULT_TOL
    component: tuple[int, ...] = field(default=(), repr=False)

    @property
    def max_entry(self) -> float:
        return float(self.x.max())

    @property
    def argmax(self) -> int:
        """Vertex with the largest entry; ties go to the lowest index."""
        return int(np.argmax(self.x))


def _power_iteration(a, tol: float, max_iter: int) -> tuple[float, np.ndarray, float, int, bool]:
    """Top eigenpair of a connected nonnegative symmetric matrix.

    Iterates with A + I so bipartite components (spectrum symmetric about 0)
    still converge.
    """
    d = np.asarray(a.sum(axis=1)).ravel()
    x = d / np.linalg.norm(d)
    ax = a @ x
    lam = float(x @ ax)
    for it in range(1, max_iter + 1):
        y = ax + x
        x = y / np.linalg.norm(y)
        ax = a @ x
        lam_new = float(x @ ax)
        res = float(np.linalg.norm(ax - lam_new * x))
        if res <= tol and abs(lam_new - lam) <= tol * max(1.0, lam_new):
            return lam_new, x, res, it, True
        lam = lam_new
    return lam, x, float(np.linalg.norm(ax - lam * x)), max_iter, False


def perron(g: Graph, tol: float = DEFAULT_TOL, max_iter: int | None = None) -> PerronData:
    """Spectral radius and unit nonnegative eigenvector of g.

    Each connected component is solved separately.  The returned vector lives
    on the component with the largest eigenvalue and is zero elsewhere; when
    two components tie (within a few tol) the one holding the smallest vertex
    index wins and ``tie`` is set.
    """
    if g.m == 0:
        raise GraphError("perron() needs a graph with at least one edge")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter is None:
        max_iter = 100 * g.n + 10000
    ncomp, lab = connected_components(g.csr, directed=False)
    best = None
    tie = False
    comps = sorted((np.flatnonzero(lab == c) for c in range(ncomp)), key=lambda vs: vs[0])
    for verts in comps:
        if verts.size < 2:
            continue
        sub = g.csr[verts][:, verts]
        if verts.size <= 64:
            sub = sub.toarray()
        lam, x, res, its, ok = _power_iteration(sub, tol, max_iter)
        cand = (lam, x, res, its, ok, verts)
        if best is None:
            best = cand
            continue
        gap = lam - best[0]
        tie_tol = 10 * tol * max(1.0, lam)
        if gap > tie_tol:
            best, tie = cand, False
        elif abs(gap) <= tie_tol:
            tie = True
    lam, xs, res, its, ok, verts = best
    x = np.zeros(g.n)
    x[verts] = np.maximum(xs, 0.0)
    x /= np.linalg.norm(x)
    comp_id = int(lab[verts[0]])
    return PerronData(lam, x, res, its, comp_id, ok, tie, tol, tuple(verts.tolist()))


def spectral_radius(g: Graph, tol: float = DEFAULT_TOL) -> float:
    if g.m == 0:
        return 0.0
    return perron(g, tol).lam


def dense_spectral_radius(g: Graph) -> float:
    """Largest adjacency eigenvalue via LAPACK (reference path)."""
    if g.n == 0:
        return 0.0
    return float(np.linalg.eigvalsh(g.adjacency_matrix())[-1])


def rayleigh(g: Graph, v) -> float:
    """2 * sum_{uv in E} v_u v_v / |v|^2."""
    v = np.asarray(v, dtype=float)
    nrm = float(v @ v)
    if nrm == 0.0:
        raise ValueError("Rayleigh quotient of the zero vector")
    if g.m == 0:
        return 0.0
    e = np.asarray(g.edges)
    return float(2.0 * np.sum(v[e[:, 0]] * v[e[:, 1]]) / nrm)


@dataclass(frozen=True)
class WalkTable:
    ell: int
    total: int
    from_vertex: tuple[int, ...]
    between: np.ndarray | None = None
    big_int: bool = False


def _step(g: Graph, vec: np.ndarray) -> np.ndarray:
    out = np.zeros_like(vec)
    if g.m:
        e = np.asarray(g.edges)
        np.add.at(out, e[:, 0], vec[e[:, 1]])
        np.add.at(out, e[:, 1], vec[e[:, 0]])
    return out


def walk_table(g: Graph, ell: int, with_between: bool = False) -> WalkTable:
    """Exact counts of walks on ``ell`` vertices.

    ``from_vertex[i]`` is w_ell(i), the number of walks starting at i, and
    ``between[i, j]`` is w_ell(i, j) = (A^(ell-1))_{ij}.  Counting runs in
    int64 and switches to Python integers once the next step could overflow.
    """
    if not 1 <= ell <= WALK_ELL_CAP:
        raise ValueError(f"ell must lie in 1..{WALK_ELL_CAP}")
    dmax = max(g.max_degree, 1)
    big = False
    vec = np.ones(g.n, dtype=np.int64)
    for _ in range(ell - 1):
        if not big and (int(vec.max(initial=0)) * dmax >= _INT64_SAFE):
            vec = vec.astype(object)
            big = True
        vec = _step(g, vec)
    between = None
    if with_between:
        a = g.adjacency_matrix(dtype=np.int64)
        p = np.eye(g.n, dtype=np.int64)
        bbig = False
        for _ in range(ell - 1):
            if not bbig and int(p.max(initial=0)) * dmax >= _INT64_SAFE:
                p, a = p.astype(object), a.astype(object)
                bbig = True
            p = p.dot(a)
        between = p
        big = big or bbig
    fv = tuple(int(c) for c in vec)
    return WalkTable(ell, sum(fv), fv, between, big)


def walk_count(g: Graph, ell: int) -> int:
    return walk_table(g, ell).total


def bipartite_norm_split(g: Graph, partition: VertexPartition, p: PerronData) -> tuple[float, float]:
    """Squared mass of the Perron vector on each side of a bipartition."""
    if partition.r != 2:
        raise GraphError("bipartite_norm_split needs exactly two parts")
    lab = partition.labels(g.n)
    support = np.flatnonzero(p.x > 0)
    if np.any(lab[support] < 0):
        raise GraphError("partition does not cover the support of the Perron vector")
    for u, v in g.edges:
        if lab[u] >= 0 and lab[u] == lab[v]:
            raise GraphError(f"edge ({u}, {v}) lies inside a part; graph is not bipartite across it")
    x2 = p.x**2
    return float(x2[lab == 0].sum()), float(x2[lab == 1].sum())


def two_coloring(g: Graph) -> VertexPartition | None:
    """BFS 2-coloring (smallest vertex of each component on side 0), or None."""
    color = [-1] * g.n
    for s in range(g.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for w in g.adjacency[u]:
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    stack.append(w)
                elif color[w] == color[u]:
                    return None
    return VertexPartition.from_labels(color, 2)
