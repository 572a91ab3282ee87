"""Exact clique, codegree and subgraph statistics, and structure finders.

Most routines work on Python-int bitsets (``Graph.bitsets``): bit v of
``bitsets[u]`` is set iff uv is an edge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .graph import Graph, gen_complete, gen_cycle, norm_edge

CLIQUE_ELL_CAP = 8
KST_EXACT_MAX_N = 40
KST_RESTARTS = 32
CYCLE_L_CAP = 20


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# --- cliques ----------------------------------------------------------------


@dataclass(frozen=True)
class CliqueProfile:
    counts: tuple[int, ...]  # counts[i-1] = k_i
    clique_number: int

    def k(self, i: int) -> int:
        if i < 1:
            raise ValueError("clique order starts at 1")
        return self.counts[i - 1] if i <= len(self.counts) else 0


def clique_profile(g: Graph, ellmax: int = 4) -> CliqueProfile:
    """k_1..k_ellmax by recursion over higher-indexed common neighbours."""
    if not 1 <= ellmax <= CLIQUE_ELL_CAP:
        raise ValueError(f"ellmax must lie in 1..{CLIQUE_ELL_CAP}")
    counts = [0] * ellmax
    bs = g.bitsets
    up = [b >> (v + 1) << (v + 1) for v, b in enumerate(bs)]

    def extend(depth: int, cand: int) -> None:
        # a clique of size `depth` has been fixed; cand = its common up-neighbours
        counts[depth - 1] += 1
        if depth == ellmax:
            return
        for w in _bits(cand):
            extend(depth + 1, cand & up[w])

    for v in range(g.n):
        extend(1, up[v])
    return CliqueProfile(tuple(counts), clique_number(g))


def find_clique(g: Graph, k: int) -> tuple[int, ...] | None:
    """Some k-clique of g (lexicographically first), or None."""
    if k <= 0:
        return ()
    bs = g.bitsets
    deg = g.degrees

    def grow(chosen: list[int], cand: int) -> tuple[int, ...] | None:
        if len(chosen) == k:
            return tuple(chosen)
        if bin(cand).count("1") < k - len(chosen):
            return None
        for w in _bits(cand):
            if deg[w] < k - 1:
                continue
            hit = grow(chosen + [w], cand & bs[w] & ~((1 << (w + 1)) - 1))
            if hit:
                return hit
        return None

    return grow([], (1 << g.n) - 1)


def clique_number(g: Graph) -> int:
    """Maximum clique size (greedy-coloring bound branch and bound)."""
    if g.n == 0:
        return 0
    bs = g.bitsets
    best = 1

    def color_bound(cand: int) -> list[tuple[int, int]]:
        # greedy sequential coloring; returns (vertex, color) in color order
        out = []
        color = 0
        rest = cand
        while rest:
            color += 1
            avail = rest
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= ~bs[v] & ~(1 << v)
                rest &= ~(1 << v)
                out.append((v, color))
        return out

    def expand(size: int, cand: int) -> None:
        nonlocal best
        order = color_bound(cand)
        for v, c in reversed(order):
            if size + c <= best:
                return
            nc = cand & bs[v]
            if nc:
                expand(size + 1, nc)
            elif size + 1 > best:
                best = size + 1
            cand &= ~(1 << v)

    expand(0, (1 << g.n) - 1)
    return best


# --- subgraph containment ---------------------------------------------------


def _pattern_order(f: Graph) -> list[int]:
    """Connected-first ordering of pattern vertices, high degree first."""
    order: list[int] = []
    placed: set[int] = set()
    deg = f.degrees
    while len(order) < f.n:
        rest = [v for v in range(f.n) if v not in placed]
        linked = [v for v in rest if any(u in placed for u in f.adjacency[v])]
        pool = linked or rest
        v = max(pool, key=lambda u: (sum(1 for w in f.adjacency[u] if w in placed), deg[u], -u))
        order.append(v)
        placed.add(v)
    return order


def _embed(g: Graph, f: Graph, fixed: dict[int, int]) -> dict[int, int] | None:
    """Extend a partial injective map V(f)->V(g) to an edge-preserving one."""
    if f.n > g.n or f.m > g.m:
        return None
    bs = g.bitsets
    gdeg = g.degrees
    fdeg = f.degrees
    order = [v for v in _pattern_order(f) if v not in fixed]
    full = (1 << g.n) - 1
    mapping = dict(fixed)
    used = 0
    for w in mapping.values():
        used |= 1 << w

    def rec(k: int, used: int) -> bool:
        if k == len(order):
            return True
        a = order[k]
        cand = full & ~used
        for b in f.adjacency[a]:
            if b in mapping:
                cand &= bs[mapping[b]]
        for w in _bits(cand):
            if gdeg[w] < fdeg[a]:
                continue
            mapping[a] = w
            if rec(k + 1, used | (1 << w)):
                return True
            del mapping[a]
        return False

    return dict(mapping) if rec(0, used) else None


def find_subgraph(g: Graph, f: Graph) -> dict[int, int] | None:
    """An embedding of f into g as a (not necessarily induced) subgraph."""
    return _embed(g, f, {})


def is_f_free(g: Graph, f: Graph) -> tuple[bool, dict[int, int] | None]:
    """(True, None) if g has no copy of f, else (False, embedding f-vertex -> g-vertex)."""
    hit = find_subgraph(g, f)
    return hit is None, hit


def find_subgraph_through_edge(g: Graph, f: Graph, u: int, v: int) -> dict[int, int] | None:
    """A copy of f in g that uses the edge uv (g must contain uv)."""
    for a, b in f.edges:
        for x, y in ((u, v), (v, u)):
            hit = _embed(g, f, {a: x, b: y})
            if hit is not None:
                return hit
    return None


def chromatic_number(f: Graph) -> int:
    """Exact chromatic number by backtracking k-colouring in DSATUR order."""
    if f.n == 0:
        return 0
    if f.m == 0:
        return 1
    adj = f.adjacency

    def colorable(k: int) -> bool:
        color = [-1] * f.n

        def pick() -> int:
            best, key = -1, None
            for v in range(f.n):
                if color[v] >= 0:
                    continue
                sat = len({color[u] for u in adj[v] if color[u] >= 0})
                kk = (sat, len(adj[v]), -v)
                if key is None or kk > key:
                    best, key = v, kk
            return best

        def rec(done: int, used: int) -> bool:
            if done == f.n:
                return True
            v = pick()
            taken = {color[u] for u in adj[v]}
            # symmetry: a fresh colour only needs to be tried once
            for c in range(min(k, used + 1)):
                if c in taken:
                    continue
                color[v] = c
                if rec(done + 1, max(used, c + 1)):
                    return True
                color[v] = -1
            return False

        return rec(0, 0)

    k = max(2, clique_number(f))
    while not colorable(k):
        k += 1
    return k


# --- codegrees and bicliques -------------------------------------------------


@dataclass(frozen=True)
class CodegreeData:
    t: int
    witness: tuple[int, int]
    matrix: np.ndarray  # C[i, j] = |N(i) & N(j)|, C[i, i] = d_i

    def C(self, i: int, j: int) -> int:
        return int(self.matrix[i, j])


def codegree_matrix(g: Graph) -> np.ndarray:
    a = g.adjacency_matrix(dtype=np.int64)
    return a @ a


def codegree_data(g: Graph) -> CodegreeData:
    if g.n < 2:
        raise ValueError("codegrees need at least two vertices")
    c = codegree_matrix(g)
    off = c.copy()
    np.fill_diagonal(off, -1)
    t = int(off.max())
    iu, ju = np.nonzero(np.triu(off == t, 1))
    k = np.lexsort((ju, iu))[0]
    return CodegreeData(t, (int(iu[k]), int(ju[k])), c)


def find_k2t(g: Graph) -> tuple[int, int, int, frozenset[int]]:
    """The pair with the most common neighbours: a largest K_{2,t}."""
    cd = codegree_data(g)
    u, v = cd.witness
    common = g.neighbor_sets[u] & g.neighbor_sets[v]
    return u, v, cd.t, frozenset(common)


@dataclass(frozen=True)
class KstResult:
    left: tuple[int, ...]
    right: frozenset[int]
    t: int
    exact: bool


def _popcount(x: int) -> int:
    return bin(x).count("1")


def find_kst(g: Graph, s: int, seed: int = 0) -> KstResult:
    """Maximise |common neighbourhood| over s-sets of vertices.

    Exhaustive for n <= 40; otherwise greedy growth from the best codegree
    pairs with 32 restarts, which is only a lower bound (``exact=False``).
    """
    if not 2 <= s <= 4:
        raise ValueError("s must lie in 2..4")
    bs = g.bitsets
    if g.n < s:
        return KstResult((), frozenset(), 0, True)
    if g.n <= KST_EXACT_MAX_N:
        best_t, best_s, best_c = -1, None, 0
        verts = sorted(range(g.n), key=lambda v: (-_popcount(bs[v]), v))

        def rec(start: int, chosen: list[int], common: int) -> None:
            nonlocal best_t, best_s, best_c
            pc = _popcount(common)
            if pc <= best_t and chosen:
                return
            if len(chosen) == s:
                best_t, best_s, best_c = pc, tuple(sorted(chosen)), common
                return
            for i in range(start, len(verts)):
                v = verts[i]
                if _popcount(bs[v]) <= best_t:
                    break
                rec(i + 1, chosen + [v], (common & bs[v]) if chosen else bs[v])

        rec(0, [], 0)
        return KstResult(best_s, frozenset(_bits(best_c)), best_t, True)

    rng = np.random.default_rng(seed)
    cd = codegree_matrix(g)
    np.fill_diagonal(cd, -1)
    iu, ju = np.triu_indices(g.n, 1)
    vals = cd[iu, ju]
    order = np.lexsort((ju, iu, -vals))
    seeds = [(int(iu[k]), int(ju[k])) for k in order[: KST_RESTARTS // 2]]
    while len(seeds) < KST_RESTARTS:
        a, b = rng.choice(g.n, 2, replace=False)
        seeds.append((int(min(a, b)), int(max(a, b))))
    best = KstResult((), frozenset(), -1, False)
    for a, b in seeds:
        chosen = [a, b]
        common = bs[a] & bs[b]
        while len(chosen) < s:
            cands = [v for v in range(g.n) if v not in chosen]
            v = max(cands, key=lambda w: (_popcount(common & bs[w]), -w))
            chosen.append(v)
            common &= bs[v]
        t = _popcount(common)
        if t > best.t:
            best = KstResult(tuple(sorted(chosen)), frozenset(_bits(common)), t, False)
    return best


def find_ktt(g: Graph) -> KstResult:
    """Greedy balanced biclique K_{t,t}; a lower bound, never claimed optimal."""
    bs = g.bitsets
    best = KstResult((), frozenset(), 0, False)
    for a in range(g.n):
        chosen = [a]
        common = bs[a]
        while True:
            t = min(len(chosen), _popcount(common))
            if t > best.t:
                right = sorted(_bits(common))[: len(chosen)]
                best = KstResult(tuple(sorted(chosen)), frozenset(right), t, False)
            cands = [v for v in range(g.n)
                     if v not in chosen and _popcount(common & bs[v]) > len(chosen)]
            if not cands:
                break
            v = max(cands, key=lambda w: (_popcount(common & bs[w]), -w))
            chosen.append(v)
            common &= bs[v]
    return best


# --- cycles, neighbourhoods, triangles ---------------------------------------


def _blocks_max_size(g: Graph) -> int:
    """Largest biconnected block (in vertices), an upper bound on cycle length."""
    n = g.n
    adj = g.adjacency
    disc = [-1] * n
    low = [0] * n
    estack: list[tuple[int, int]] = []
    best = 0
    timer = 0
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = timer
        timer += 1
        work = [(root, -1, 0)]  # iterative Tarjan: (vertex, parent, next neighbour index)
        while work:
            u, parent, i = work[-1]
            if i < len(adj[u]):
                work[-1] = (u, parent, i + 1)
                w = adj[u][i]
                if disc[w] < 0:
                    estack.append((u, w))
                    disc[w] = low[w] = timer
                    timer += 1
                    work.append((w, u, 0))
                elif w != parent and disc[w] < disc[u]:
                    estack.append((u, w))
                    low[u] = min(low[u], disc[w])
                continue
            work.pop()
            if parent < 0:
                continue
            low[parent] = min(low[parent], low[u])
            if low[u] >= disc[parent]:
                comp = set()
                while True:
                    e = estack.pop()
                    comp.update(e)
                    if e == (parent, u):
                        break
                if len(comp) >= 3:
                    best = max(best, len(comp))
    return best


def cycle_spectrum(g: Graph, Lmax: int = 10) -> frozenset[int]:
    """Exact set of cycle lengths l <= Lmax occurring in g."""
    if Lmax > CYCLE_L_CAP:
        raise ValueError(f"Lmax is capped at {CYCLE_L_CAP}")
    bound = min(Lmax, _blocks_max_size(g))
    if bound < 3:
        return frozenset()
    from .spectral import two_coloring

    bip = two_coloring(g) is not None
    possible = {l for l in range(3, bound + 1) if not (bip and l % 2)}
    found: set[int] = set()
    bs = g.bitsets

    for s in range(g.n):
        if found >= possible:
            break
        higher = ~((1 << (s + 1)) - 1)
        # cycles whose minimum vertex is s; paths s -> ... -> v over vertices > s
        start_nb = bs[s] & higher

        def dfs(v: int, length: int, visited: int) -> None:
            if found >= possible:
                return
            if length >= 3 and (bs[v] >> s) & 1:
                found.add(length)
            if length == bound:
                return
            for w in _bits(bs[v] & higher & ~visited):
                dfs(w, length + 1, visited | (1 << w))

        for v in _bits(start_nb):
            dfs(v, 2, (1 << s) | (1 << v))
    return frozenset(l for l in found if l <= Lmax)


def edges_within(g: Graph, verts) -> int:
    mask = 0
    for v in verts:
        mask |= 1 << v
    bs = g.bitsets
    return sum(_popcount(bs[v] & mask) for v in verts) // 2


def dense_neighborhood(g: Graph, threshold: float) -> int | None:
    """Lowest vertex i with e(N(i)) > threshold * |N(i)| (strict), else None."""
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    for i in range(g.n):
        nb = g.adjacency[i]
        if nb and edges_within(g, nb) > threshold * len(nb):
            return i
    return None


@dataclass(frozen=True)
class TriangleHypergraph:
    triples: frozenset[tuple[int, int, int]]
    shadow: frozenset[tuple[int, int]]


def triangles(g: Graph) -> list[tuple[int, int, int]]:
    bs = g.bitsets
    out = []
    for u, v in g.edges:
        for w in _bits(bs[u] & bs[v] & ~((1 << (v + 1)) - 1)):
            out.append((u, v, w))
    return out


def triangle_hypergraph(g: Graph) -> TriangleHypergraph:
    tr = triangles(g)
    shadow = {norm_edge(a, b) for t in tr for a, b in itertools.combinations(t, 2)}
    return TriangleHypergraph(frozenset(tr), frozenset(shadow))


def pattern(name: str) -> Graph:
    """Forbidden-graph shorthand: K4, C5, K2,3, P4 ..."""
    from .graph import gen_complete_bipartite, gen_path

    s = name.strip().upper().replace("_", "").replace("{", "").replace("}", "")
    if s.startswith("K") and "," in s:
        a, b = s[1:].split(",")
        return gen_complete_bipartite(int(a), int(b))[0]
    if s.startswith("K"):
        return gen_complete(int(s[1:]))
    if s.startswith("C"):
        return gen_cycle(int(s[1:]))
    if s.startswith("P"):
        return gen_path(int(s[1:]))
    raise ValueError(f"unknown pattern {name!r}")
