"""Constructive stability: bipartization, biclique and Turan certificates.

Each pipeline keeps a log of its stages and returns a
:class:`StabilityCertificate` whose edit count is recomputed from scratch
against the input graph.  Inputs that miss a construction's spectral hypothesis
still get a certificate, with ``hypothesis_met`` cleared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .bounds import BoundPreconditionError
from .counting import chromatic_number, find_clique, find_subgraph_through_edge, is_f_free
from .graph import (
    Edge,
    Graph,
    GraphError,
    VertexPartition,
    edit_count_labels,
    edit_distance_template,
    norm_edge,
)
from .spectral import perron, spectral_radius, two_coloring

EXACT_MAX = 14
LOCAL_RESTARTS = 16
CERT_VERSION = 1
_TIE = 1e-12


def _lam(g: Graph) -> float:
    return spectral_radius(g) if g.m else 0.0


def _perron_vec(g: Graph) -> np.ndarray:
    return perron(g).x if g.m else np.zeros(g.n)


# --- bipartization ----------------------------------------------------------


def bipartize_triangle_free(g: Graph) -> tuple[VertexPartition, frozenset[Edge]]:
    """Split V into ({u} + W, N(u)) around the top Perron entry u.

    W is everything outside the closed neighbourhood of u; edges inside W
    are the ones removed.
    """
    if g.m < 1:
        raise GraphError("needs at least one edge")
    tri = find_clique(g, 3)
    if tri is not None:
        raise BoundPreconditionError(f"triangle on {tri}", witness=tri)
    x = perron(g).x
    u = int(np.flatnonzero(x >= x.max() - _TIE)[0])
    nbr = g.neighbor_sets[u]
    w = [v for v in range(g.n) if v != u and v not in nbr]
    wset = set(w)
    removed = frozenset(e for e in g.edges if e[0] in wset and e[1] in wset)
    return VertexPartition.of([u] + w, sorted(nbr)), removed


def bipartize_hypothesis(g: Graph, eps: float) -> bool:
    """lambda >= (1 - eps/2) sqrt(m), under which at most eps*m edges go."""
    return _lam(g) >= (1 - eps / 2) * math.sqrt(g.m)


# --- certificates -----------------------------------------------------------


@dataclass(frozen=True)
class PipelineStep:
    stage: str
    edges_removed: int
    lam_before: float
    lam_after: float
    note: str = ""


@dataclass(frozen=True)
class StabilityCertificate:
    kind: str
    parts: VertexPartition
    edit_count: int
    m: int
    n: int
    delta_used: float
    eps_target: float
    hypothesis_met: bool
    pipeline_log: tuple[PipelineStep, ...] = ()
    params: dict = field(default_factory=dict)

    @property
    def edit_fraction(self) -> float:
        return self.edit_count / self.m if self.m else 0.0

    @property
    def removed_total(self) -> int:
        return sum(s.edges_removed for s in self.pipeline_log)

    def to_text(self) -> str:
        lines = [
            f"spectral-turan certificate v{CERT_VERSION}",
            f"kind {self.kind}",
            f"n {self.n}",
            f"m {self.m}",
            f"edit_count {self.edit_count}",
            f"eps_target {self.eps_target!r}",
            f"delta_used {self.delta_used!r}",
            f"hypothesis_met {str(self.hypothesis_met).lower()}",
        ]
        for k in sorted(self.params):
            lines.append(f"param {k} {self.params[k]!r}")
        for p in self.parts.parts:
            lines.append("part " + " ".join(map(str, p)))
        for s in self.pipeline_log:
            lines.append(f"log {s.stage} {s.edges_removed} {s.lam_before!r} {s.lam_after!r} {s.note}".rstrip())
        lines.append("end")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "StabilityCertificate":
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not rows or rows[0][:2] != ["spectral-turan", "certificate"]:
            raise ValueError("not a certificate record")
        if rows[0][2] != f"v{CERT_VERSION}":
            raise ValueError(f"unsupported certificate version {rows[0][2]}")
        if rows[-1] != ["end"]:
            raise ValueError("truncated certificate record")
        head: dict[str, str] = {}
        params: dict = {}
        parts, log = [], []
        for row in rows[1:-1]:
            key = row[0]
            if key == "part":
                parts.append(tuple(int(v) for v in row[1:]))
            elif key == "log":
                log.append(PipelineStep(row[1], int(row[2]), float(row[3]), float(row[4]), " ".join(row[5:])))
            elif key == "param":
                params[row[1]] = _parse_scalar(row[2])
            else:
                head[key] = row[1]
        return cls(
            kind=head["kind"],
            parts=VertexPartition(tuple(parts)),
            edit_count=int(head["edit_count"]),
            m=int(head["m"]),
            n=int(head["n"]),
            delta_used=float(head["delta_used"]),
            eps_target=float(head["eps_target"]),
            hypothesis_met=head["hypothesis_met"] == "true",
            pipeline_log=tuple(log),
            params=params,
        )


def _parse_scalar(s: str):
    for conv in (int, float):
        try:
            return conv(s)
        except ValueError:
            pass
    if s in ("True", "False"):
        return s == "True"
    return s.strip("'\"")


def biclique_certificate(g: Graph, eps: float, parts: VertexPartition | None = None,
                         delta: float | None = None) -> StabilityCertificate:
    """U/V truncation of the Perron vector on a bipartite graph.

    Entries on each side are sorted in decreasing order (ties by vertex);
    r and s are the shortest prefixes carrying squared mass eps^2, and
    U, V keep every vertex within a factor 4 of the cutoff entry.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if delta is None:
        delta = eps**4 / 100
    if parts is None:
        parts = two_coloring(g)
        if parts is None:
            raise GraphError("graph is not bipartite")
    if parts.r != 2:
        raise GraphError("need a two-part bipartition")
    lab = parts.labels(g.n)
    for u, v in g.edges:
        if lab[u] < 0 or lab[v] < 0 or lab[u] == lab[v]:
            raise GraphError(f"edge ({u}, {v}) is not across the bipartition")
    lam = _lam(g)
    x = _perron_vec(g)
    sides = []
    for side in parts.parts:
        order = sorted(side, key=lambda v: (-x[v], v))
        vals = x[order]
        cum = np.cumsum(vals**2)
        hit = np.flatnonzero(cum >= eps**2 - _TIE)
        pos = np.flatnonzero(vals > 0)
        if hit.size:
            cut = vals[hit[0]]
        elif pos.size:
            cut = vals[pos[-1]]
        else:
            sides.append(())
            continue
        sides.append(tuple(v for v in order if x[v] > 0 and x[v] >= cut / 4))
    cert_parts = VertexPartition(tuple(sides))
    count, _ = edit_distance_template(g, cert_parts)
    hyp = lam >= (1 - delta) * math.sqrt(g.m) - _TIE
    return StabilityCertificate(
        "biclique", cert_parts, count, g.m, g.n, delta, eps, hyp,
        (PipelineStep("truncate", 0, lam, lam),),
        {"eps_in_range": 0 < eps < 0.01},
    )


# --- edge classification and peeling -----------------------------------------


@dataclass(frozen=True)
class EdgeClassification:
    alpha: float
    delta: float
    good: frozenset[Edge]
    bad: frozenset[Edge]
    moment: float
    lam: float
    hypothesis_met: bool

    @property
    def bad_bound(self) -> float:
        m = len(self.good) + len(self.bad)
        return 4 * math.sqrt(self.delta) * m


def _alpha(r: int, m: int) -> float:
    return ((1 - 1 / r) / (2 * m)) ** 0.25


def _clique_hypothesis(lam: float, r: int, m: int, delta: float) -> bool:
    return lam**2 >= (1 - 1 / r - delta) * 2 * m - 1e-9 * max(1.0, m)


def classify_edges(g: Graph, r: int, delta: float) -> EdgeClassification:
    """Good edges have |x_i x_j - alpha^2| <= delta^(1/4) alpha^2."""
    if g.m < 1:
        raise GraphError("needs at least one edge")
    if r < 3:
        raise ValueError("r must be at least 3")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    pd = perron(g)
    a = _alpha(r, g.m)
    e = np.asarray(g.edges)
    dev = pd.x[e[:, 0]] * pd.x[e[:, 1]] - a * a
    is_bad = np.abs(dev) > delta**0.25 * a * a
    good = frozenset(g.edges[k] for k in np.flatnonzero(~is_bad))
    bad = frozenset(g.edges[k] for k in np.flatnonzero(is_bad))
    return EdgeClassification(a, delta, good, bad, float(np.sum(dev**2)), pd.lam,
                              _clique_hypothesis(pd.lam, r, g.m, delta))


@dataclass(frozen=True)
class PeelState:
    gamma_sets: tuple[frozenset[int], ...]
    s_values: tuple[float, ...]
    ell: int
    alpha: float
    delta: float
    lam: float
    hypothesis_met: bool

    @property
    def nested(self) -> bool:
        return all(b <= a for a, b in zip(self.gamma_sets, self.gamma_sets[1:]))

    def recurrence_ok(self) -> bool:
        """s_t <= 0.9 s_{t-1} + 2 delta^(1/4) for t >= 2."""
        d4 = self.delta**0.25
        s = self.s_values
        return all(s[t] <= 0.9 * s[t - 1] + 2 * d4 + 1e-12 for t in range(1, len(s)))

    def envelope_ok(self) -> bool:
        """s_t <= 20 delta^(1/4) + 0.9^(t-1) for every t."""
        d4 = self.delta**0.25
        return all(s <= 20 * d4 + 0.9**t + 1e-12 for t, s in enumerate(self.s_values))

    def final_ok(self) -> bool:
        return self.s_values[-1] <= 30 * self.delta**0.25 + 1e-12


def peel_delta(eps: float) -> float:
    return (0.1 * eps) ** 8


def peel_clique_stability(g: Graph, r: int, delta: float | None = None, eps: float | None = None,
                          check_free: bool = True) -> tuple[PeelState, frozenset[int], frozenset[Edge]]:
    """Drop the vertices whose Perron entry strays from alpha.

    Returns the peel state, the kept vertex set V' = V - Gamma_ell and the
    edges R meeting Gamma_ell.  Give either ``delta`` or the target ``eps``
    (then delta = (eps/10)^8).
    """
    if r < 3:
        raise ValueError("r must be at least 3; use biclique_certificate for r = 2")
    if g.m < 1:
        raise GraphError("needs at least one edge")
    if delta is None:
        if eps is None:
            raise ValueError("give delta or eps")
        delta = peel_delta(eps)
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if check_free:
        hit = find_clique(g, r + 1)
        if hit is not None:
            raise BoundPreconditionError(f"graph contains K_{r + 1} on {hit}", witness=hit)
    pd = perron(g)
    a = _alpha(r, g.m)
    # round before flooring so (0.1 eps)^8 round-trips to the intended integer
    ell = max(1, int(math.floor(round(delta ** (-1 / 8), 9) / 2)))
    dev = np.abs(pd.x - a)
    step = 2 * delta**0.25 * a
    x2 = pd.x**2
    gammas, svals = [], []
    for t in range(1, ell + 1):
        mask = dev >= step * t
        gammas.append(frozenset(np.flatnonzero(mask).tolist()))
        svals.append(float(x2[mask].sum()))
    last = gammas[-1]
    kept = frozenset(range(g.n)) - last
    removed = frozenset(e for e in g.edges if e[0] in last or e[1] in last)
    state = PeelState(tuple(gammas), tuple(svals), ell, a, delta, pd.lam,
                      _clique_hypothesis(pd.lam, r, g.m, delta))
    return state, kept, removed


def peel_bounds(g: Graph, r: int, state: PeelState, kept, removed, eps: float) -> dict[str, bool]:
    """The size and edge bounds promised when the hypothesis holds."""
    return {
        "removed_le_200_delta4_m": len(removed) <= 200 * state.delta**0.25 * g.m,
        "kept_size": len(kept) <= (1 + eps) * math.sqrt(2 * r * g.m / (r - 1)),
    }


# --- pruning ----------------------------------------------------------------


class PruneResult(NamedTuple):
    graph: Graph
    removed: list[Edge]
    capped: bool


def prune_bad_edges(g: Graph, eps: float, max_steps: int | None = None) -> PruneResult:
    """Delete low-weight edges one at a time, recomputing x' after each.

    An edge ij is low when x'_i x'_j < eps m^(-1/2) with m the original edge
    count; the smallest product goes first (ties lexicographic).  Stops when
    no edge is low or after ceil(4 eps m) deletions (``capped``).
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if g.m == 0:
        return PruneResult(g, [], False)
    thresh = eps / math.sqrt(g.m)
    cap = math.ceil(4 * eps * g.m) if max_steps is None else max_steps
    cur = g
    removed: list[Edge] = []
    while cur.m and len(removed) < cap:
        x = perron(cur).x
        e = np.asarray(cur.edges)
        prod = x[e[:, 0]] * x[e[:, 1]]
        k = int(np.argmin(prod))  # edges are sorted, so argmin breaks ties lexicographically
        if prod[k] >= thresh:
            break
        edge = cur.edges[k]
        removed.append(edge)
        cur = cur.remove_edges([edge])
    capped = len(removed) >= cap and cur.m > 0 and _has_low_edge(cur, thresh)
    return PruneResult(cur, removed, capped)


def _has_low_edge(g: Graph, thresh: float) -> bool:
    x = perron(g).x
    e = np.asarray(g.edges)
    return bool(np.any(x[e[:, 0]] * x[e[:, 1]] < thresh))


def _hit_cliques(g: Graph, k: int) -> tuple[Graph, list[Edge]]:
    """Greedily delete the lowest-weight edge of each K_k until none is left."""
    removed: list[Edge] = []
    while True:
        c = find_clique(g, k)
        if c is None:
            return g, removed
        x = _perron_vec(g)
        edge = min(((u, v) for i, u in enumerate(c) for v in c[i + 1:]),
                   key=lambda e: (x[e[0]] * x[e[1]], e))
        edge = norm_edge(*edge)
        removed.append(edge)
        g = g.remove_edges([edge])


# --- partition search -------------------------------------------------------


def _cost_terms(g: Graph, labels: np.ndarray, r: int):
    """Neighbour counts per part, uncovered-neighbour counts, part sizes."""
    nbr = np.zeros((g.n, r), dtype=np.int64)
    unc = np.zeros(g.n, dtype=np.int64)
    for u, v in g.edges:
        lu, lv = labels[u], labels[v]
        if lv >= 0:
            nbr[u, lv] += 1
        else:
            unc[u] += 1
        if lu >= 0:
            nbr[v, lu] += 1
        else:
            unc[v] += 1
    sizes = np.bincount(labels[labels >= 0], minlength=r).astype(np.int64)
    return nbr, unc, sizes


def _local_improve(g: Graph, labels: np.ndarray, r: int, movable, allow_uncover: bool) -> np.ndarray:
    """Best-improvement single-vertex moves until no move lowers the edit count.

    A vertex v in part p contributes 2 N_p(v) + 2 U(v) + cov - S_p - deg(v)
    where N_p counts neighbours in p, U uncovered neighbours, S_p the size
    of p without v and cov the number of covered vertices without v; an
    uncovered v contributes deg(v).
    """
    labels = labels.copy()
    nbr, unc, sizes = _cost_terms(g, labels, r)
    deg = g.degrees
    adj = g.adjacency
    movable = list(movable)
    improved = True
    while improved:
        improved = False
        for v in movable:
            a = labels[v]
            cov = int(sizes.sum()) - (1 if a >= 0 else 0)
            s = sizes.copy()
            if a >= 0:
                s[a] -= 1
            costs = 2 * nbr[v] + 2 * unc[v] + cov - s - deg[v]
            cur = int(deg[v]) if a < 0 else int(costs[a])
            b = int(np.argmin(costs))
            best, target = int(costs[b]), b
            if allow_uncover and deg[v] < best:
                best, target = int(deg[v]), -1
            if best >= cur or target == a:
                continue
            labels[v] = target
            if a >= 0:
                sizes[a] -= 1
            if target >= 0:
                sizes[target] += 1
            for w in adj[v]:
                if a >= 0:
                    nbr[w, a] -= 1
                else:
                    unc[w] -= 1
                if target >= 0:
                    nbr[w, target] += 1
                else:
                    unc[w] += 1
            improved = True
    return labels


def _exact_partition(g: Graph, cs: list[int], r: int, upper: int) -> tuple[np.ndarray | None, int]:
    """Branch and bound over restricted-growth label strings on cs."""
    k = len(cs)
    idx = {v: i for i, v in enumerate(cs)}
    adj = [0] * k
    for u, v in g.edges:
        if u in idx and v in idx:
            adj[idx[u]] |= 1 << idx[v]
            adj[idx[v]] |= 1 << idx[u]
    order = sorted(range(k), key=lambda i: -bin(adj[i]).count("1"))
    best = [upper, None]
    parts = [0] * r
    lab = [-1] * k

    def place_cost(i: int, p: int, assigned: int) -> int:
        same = bin(adj[i] & parts[p]).count("1")
        other = assigned & ~parts[p]
        missing = bin(other).count("1") - bin(adj[i] & other).count("1")
        return same + missing

    def rec(pos: int, used: int, assigned: int, cost: int) -> None:
        if cost >= best[0]:
            return
        if pos == k:
            best[0], best[1] = cost, lab.copy()
            return
        # every unplaced vertex pays at least its cheapest placement now
        lb = cost
        for j in order[pos + 1:]:
            lb += min(place_cost(j, p, assigned) for p in range(min(used + 1, r)))
            if lb >= best[0]:
                return
        i = order[pos]
        opts = sorted(range(min(used + 1, r)), key=lambda p: place_cost(i, p, assigned))
        for p in opts:
            c = place_cost(i, p, assigned)
            parts[p] |= 1 << i
            lab[i] = p
            rec(pos + 1, max(used, p + 1), assigned | (1 << i), cost + c)
            parts[p] &= ~(1 << i)
            lab[i] = -1

    rec(0, 0, 0, 0)
    if best[1] is None:
        return None, upper
    out = np.full(g.n, -1, dtype=np.int64)
    for i, v in enumerate(cs):
        out[v] = best[1][i]
    return out, best[0]


def partition_search(g: Graph, C, r: int, mode: str = "local", seed: int = 0,
                     restarts: int = LOCAL_RESTARTS) -> tuple[VertexPartition, int]:
    """Partition C into at most r parts, minimising the edit count to g.

    The count is against the complete r-partite graph on the parts, with
    every edge at a vertex outside C counted as an edit.  ``exact`` is a
    branch and bound (|C| <= 14); ``local`` is the best of ``restarts``
    seeded single-vertex-move descents and gives an upper bound.
    """
    if r < 1:
        raise ValueError("r must be positive")
    cs = sorted(set(int(v) for v in C))
    if mode not in ("exact", "local", "auto"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "auto":
        mode = "exact" if len(cs) <= EXACT_MAX else "local"
    if mode == "exact" and len(cs) > EXACT_MAX:
        raise ValueError(f"exact mode needs |C| <= {EXACT_MAX}")
    rng = np.random.default_rng(seed)
    best_lab, best_cost = None, None
    for _ in range(restarts):
        lab = np.full(g.n, -1, dtype=np.int64)
        if cs:
            lab[cs] = rng.integers(0, r, size=len(cs))
        lab = _local_improve(g, lab, r, cs, allow_uncover=False)
        cost = _edit_count(g, lab)
        if best_cost is None or cost < best_cost:
            best_lab, best_cost = lab, cost
    if mode == "exact":
        # the local optimum seeds the bound; the outside-C edges are a constant
        outside = sum(1 for u, v in g.edges if best_lab[u] < 0 or best_lab[v] < 0)
        lab, inner = _exact_partition(g, cs, r, best_cost - outside + 1)
        if lab is not None:
            best_lab, best_cost = lab, inner + outside
    return VertexPartition.from_labels(best_lab.tolist(), r), int(best_cost)


def _edit_count(g: Graph, labels: np.ndarray) -> int:
    return edit_count_labels(g, labels)


# --- end-to-end pipelines ---------------------------------------------------


def _stage(log: list, name: str, before: Graph, after: Graph, removed: int, note: str = "") -> None:
    log.append(PipelineStep(name, removed, _lam(before), _lam(after), note))


def _refine(g: Graph, parts: VertexPartition, r: int, log: list) -> VertexPartition:
    """Re-admit dropped vertices and polish with single moves (never worse)."""
    lab = parts.labels(g.n)
    before = _edit_count(g, lab)
    movable = [v for v in range(g.n) if g.degrees[v] > 0]
    lab2 = _local_improve(g, lab, r, movable, allow_uncover=True)
    after = _edit_count(g, lab2)
    if after >= before:
        log.append(PipelineStep("refine", 0, _lam(g), _lam(g), f"edits {before}"))
        return parts
    moved = int(np.sum(lab != lab2))
    log.append(PipelineStep("refine", 0, _lam(g), _lam(g), f"edits {before}->{after} moved {moved}"))
    return VertexPartition.from_labels(lab2.tolist(), r)


def _whole_graph(g: Graph, parts: VertexPartition, r: int, seed: int, log: list) -> VertexPartition:
    """Local search over every non-isolated vertex; keep it only if strictly better.

    Guards against a peel that strips the whole graph when delta is tiny.
    """
    before = _edit_count(g, parts.labels(g.n))
    live = [v for v in range(g.n) if g.degrees[v] > 0]
    if not live:
        return parts
    alt, after = partition_search(g, live, r, mode="local", seed=seed)
    if after < before:
        log.append(PipelineStep("whole-graph", 0, _lam(g), _lam(g), f"edits {before}->{after}"))
        return alt
    log.append(PipelineStep("whole-graph", 0, _lam(g), _lam(g), f"edits {before}"))
    return parts


def turan_certificate(g: Graph, f: Graph, eps: float, delta: float | None = None,
                      prune_eps: float | None = None, mode: str = "auto", seed: int = 0,
                      refine: bool = True) -> StabilityCertificate:
    """Prune, clear cliques, peel, then search for the nearest T_{C,r}.

    Forbidden graphs with chromatic number 3 go to
    :func:`bipartite_like_certificate`.
    """
    chi = chromatic_number(f)
    if chi <= 3:
        return bipartite_like_certificate(g, f, eps, prune_eps=prune_eps, refine=refine)
    r = chi - 1
    free, emb = is_f_free(g, f)
    if not free:
        raise BoundPreconditionError("graph contains the forbidden subgraph", witness=emb)
    if delta is None:
        delta = peel_delta(eps)
    if prune_eps is None:
        prune_eps = eps / 20
    log: list[PipelineStep] = []
    lam0 = _lam(g)
    hyp = _clique_hypothesis(lam0, r, g.m, delta) if g.m else False

    pr = prune_bad_edges(g, prune_eps)
    _stage(log, "prune", g, pr.graph, len(pr.removed), "capped" if pr.capped else "")
    cur, hit = _hit_cliques(pr.graph, r + 1)
    _stage(log, "clique-hit", pr.graph, cur, len(hit))

    if cur.m:
        state, kept, peeled = peel_clique_stability(cur, r, delta=delta, check_free=False)
        log.append(PipelineStep("peel", len(peeled), _lam(cur), _lam(cur.remove_edges(peeled)),
                                f"ell {state.ell} s_ell {state.s_values[-1]:.6g}"))
        core = sorted(v for v in kept if cur.degrees[v] > 0)
    else:
        core = []
    parts, _ = partition_search(g, core, r, mode=mode, seed=seed)
    log.append(PipelineStep("partition", 0, lam0, lam0, f"|C| {len(core)}"))
    if refine:
        parts = _refine(g, parts, r, log)
        parts = _whole_graph(g, parts, r, seed, log)
    count, _ = edit_distance_template(g, parts)
    return StabilityCertificate(
        "turan", parts, count, g.m, g.n, delta, eps, hyp, tuple(log),
        {"r": r, "prune_eps": prune_eps, "mode": mode, "seed": seed, "refine": refine},
    )


def _default_bip_deltas(eps: float) -> tuple[float, float, float]:
    d0 = (eps / 3) ** 4 / 100
    d1 = ((eps / 2) ** 4 / 100 / 5) ** 8
    return min(d0**3, d1**3), d0, d1


def bipartite_like_certificate(g: Graph, f: Graph, eps: float, delta: float | None = None,
                               delta1: float | None = None, prune_eps: float | None = None,
                               refine: bool = True) -> StabilityCertificate:
    """Nearest biclique for a graph avoiding some 3-chromatic f.

    After pruning, a vertex with entry above delta1^(-1) m^(-1/4) sends the
    run down the large-entry split; otherwise triangles are hit greedily,
    the graph is bipartized around its top vertex and the biclique
    truncation is applied.
    """
    if chromatic_number(f) != 3:
        raise BoundPreconditionError("this pipeline needs a forbidden graph of chromatic number 3")
    free, emb = is_f_free(g, f)
    if not free:
        raise BoundPreconditionError("graph contains the forbidden subgraph", witness=emb)
    d_def, _, d1_def = _default_bip_deltas(eps)
    delta = d_def if delta is None else delta
    delta1 = d1_def if delta1 is None else delta1
    if prune_eps is None:
        prune_eps = eps / 20
    log: list[PipelineStep] = []
    lam0 = _lam(g)
    hyp = lam0**2 >= (1 - 2 * delta) * g.m - 1e-9 * max(1, g.m)

    pr = prune_bad_edges(g, prune_eps)
    _stage(log, "prune", g, pr.graph, len(pr.removed), "capped" if pr.capped else "")
    cur = pr.graph
    route = "bipartize"
    if cur.m == 0:
        parts = VertexPartition(((), ()))
    else:
        x = perron(cur).x
        m = g.m
        if x.max() > m ** -0.25 / delta1:
            route = "large-entry"
            big = x > m ** -0.25 / math.sqrt(delta)
            cross = [e for e in cur.edges if big[e[0]] != big[e[1]]]
            dropped = cur.m - len(cross)
            nxt = Graph(cur.n, tuple(cross))
            _stage(log, "split", cur, nxt, dropped)
            cur = nxt
            bip = VertexPartition.of(np.flatnonzero(big).tolist(), np.flatnonzero(~big).tolist())
        else:
            nxt, hit = _hit_cliques(cur, 3)
            _stage(log, "triangle-hit", cur, nxt, len(hit))
            cur = nxt
            bip, within = bipartize_triangle_free(cur)
            nxt = cur.remove_edges(within)
            _stage(log, "bipartize", cur, nxt, len(within))
            cur = nxt
        if cur.m:
            cert = biclique_certificate(cur, eps, parts=bip)
            parts = cert.parts
        else:
            parts = VertexPartition(((), ()))
        log.append(PipelineStep("truncate", 0, _lam(cur), _lam(cur), route))
    if refine:
        parts = _refine(g, parts, 2, log)
        parts = _whole_graph(g, parts, 2, 0, log)
    count, _ = edit_distance_template(g, parts)
    return StabilityCertificate(
        "biclique", parts, count, g.m, g.n, delta, eps, hyp, tuple(log),
        {"r": 2, "delta1": delta1, "prune_eps": prune_eps, "route": route, "refine": refine},
    )


def greedy_triangle_hitting(g: Graph) -> tuple[Graph, list[Edge]]:
    return _hit_cliques(g, 3)


def perturb_preserving(g: Graph, f: Graph, edits: int, seed: int, max_tries: int = 10000) -> tuple[Graph, int]:
    """Apply up to ``edits`` random edge flips that keep g free of f.

    Each flip removes a random edge or adds a random non-edge (even odds);
    additions that create f are rejected.  Returns the graph and the number
    of flips made.
    """
    rng = np.random.default_rng(seed)
    cur = g
    done = 0
    tries = 0
    while done < edits and tries < max_tries:
        tries += 1
        if cur.m and rng.random() < 0.5:
            e = cur.edges[int(rng.integers(cur.m))]
            cur = cur.remove_edges([e])
            done += 1
            continue
        u, v = (int(t) for t in rng.choice(cur.n, size=2, replace=False))
        if cur.has_edge(u, v):
            continue
        nxt = cur.add_edges([norm_edge(u, v)])
        if find_subgraph_through_edge(nxt, f, u, v) is None:
            cur = nxt
            done += 1
    return cur, done


__all__ = [
    "EdgeClassification",
    "PeelState",
    "PipelineStep",
    "PruneResult",
    "StabilityCertificate",
    "biclique_certificate",
    "bipartite_like_certificate",
    "bipartize_hypothesis",
    "bipartize_triangle_free",
    "classify_edges",
    "greedy_triangle_hitting",
    "partition_search",
    "peel_bounds",
    "peel_clique_stability",
    "peel_delta",
    "perturb_preserving",
    "prune_bad_edges",
    "turan_certificate",
]
