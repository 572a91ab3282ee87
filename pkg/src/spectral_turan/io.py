"""Edge-list and graph6 readers/writers, plus the exhaustive small-graph corpus."""

from __future__ import annotations

import itertools
import os
import re
from pathlib import Path
from typing import Iterable, Iterator

from .graph import Graph, GraphError


class GraphFormatError(GraphError):
    def __init__(self, msg: str, line: int | None = None, pos: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if pos is not None:
            where.append(f"byte {pos}")
        super().__init__(f"{msg} ({', '.join(where)})" if where else msg)
        self.line = line
        self.pos = pos


_DECL = re.compile(r"#\s*n\s*[=:]\s*(\d+)")

G6_MAX_N = 62


def parse_edge_list(text: str) -> Graph:
    """Parse whitespace-separated integer pairs.

    ``#`` starts a comment.  A comment of the form ``# n = 7`` declares the
    vertex count, which keeps trailing isolated vertices and fixes labels to
    ``0..n-1``.  Without a declaration the distinct labels are compacted in
    sorted order and the original labels are kept on the graph.
    """
    declared = None
    pairs: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body, _, comment = raw.partition("#")
        if comment:
            mt = _DECL.match("#" + comment)
            if mt:
                declared = int(mt.group(1))
        tok = body.split()
        if not tok:
            continue
        if len(tok) != 2:
            raise GraphFormatError(f"expected 2 integers, got {len(tok)} tokens", line=lineno)
        try:
            u, v = int(tok[0]), int(tok[1])
        except ValueError as exc:
            raise GraphFormatError(f"non-integer vertex: {exc}", line=lineno) from None
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", line=lineno)
        pairs.append((lineno, u, v))

    seen: dict[tuple[int, int], int] = {}
    for lineno, u, v in pairs:
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key} (first on line {seen[key]})", line=lineno)
        seen[key] = lineno

    if declared is not None:
        for lineno, u, v in pairs:
            if min(u, v) < 0 or max(u, v) >= declared:
                raise GraphFormatError(f"vertex outside declared range 0..{declared - 1}", line=lineno)
        return Graph.from_edges(declared, [(u, v) for _, u, v in pairs])

    labels = sorted({x for _, u, v in pairs for x in (u, v)})
    if labels == list(range(len(labels))):
        return Graph.from_edges(len(labels), [(u, v) for _, u, v in pairs])
    idx = {lab: i for i, lab in enumerate(labels)}
    return Graph.from_edges(len(labels), [(idx[u], idx[v]) for _, u, v in pairs], labels=tuple(labels))


def format_edge_list(g: Graph) -> str:
    lines = [f"# n = {g.n}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def to_graph6(g: Graph) -> str:
    n = g.n
    if n > G6_MAX_N:
        raise GraphFormatError(f"graph6 writer supports n <= {G6_MAX_N}")
    bits = []
    es = g.edge_set
    for j in range(1, n):
        for i in range(j):
            bits.append(1 if (i, j) in es else 0)
    bits += [0] * (-len(bits) % 6)
    out = [chr(n + 63)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k : k + 6]:
            val = (val << 1) | b
        out.append(chr(val + 63))
    return "".join(out)


def from_graph6(s: str, line: int | None = None) -> Graph:
    s = s.strip()
    if s.startswith(">>graph6<<"):
        s = s[10:]
    if not s:
        raise GraphFormatError("empty graph6 string", line=line, pos=0)
    for pos, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise GraphFormatError(f"invalid graph6 character {ch!r}", line=line, pos=pos)
    n = ord(s[0]) - 63
    if n > G6_MAX_N:
        raise GraphFormatError(f"graph6 reader supports n <= {G6_MAX_N}", line=line, pos=0)
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(s) - 1 != need:
        raise GraphFormatError(f"expected {need} data bytes, found {len(s) - 1}", line=line, pos=len(s))
    bits = []
    for ch in s[1:]:
        val = ord(ch) - 63
        bits.extend((val >> k) & 1 for k in range(5, -1, -1))
    if any(bits[nbits:]):
        raise GraphFormatError("nonzero padding bits", line=line, pos=len(s) - 1)
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph.from_edges(n, edges)


def read_graph6_lines(text: str) -> list[Graph]:
    return [from_graph6(ln, line=i) for i, ln in enumerate(text.splitlines(), start=1) if ln.strip()]


def load_graph(path: str | os.PathLike, format: str = "edge-list") -> Graph:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"no such file: {p}")
    text = p.read_text()
    if format == "edge-list":
        return parse_edge_list(text)
    if format == "graph6":
        graphs = read_graph6_lines(text)
        if len(graphs) != 1:
            raise GraphFormatError(f"expected one graph6 line, found {len(graphs)}")
        return graphs[0]
    raise ValueError(f"unknown format {format!r}")


def load_graphs(path: str | os.PathLike, format: str = "graph6") -> list[Graph]:
    if format == "graph6":
        return read_graph6_lines(Path(path).read_text())
    return [load_graph(path, format)]


def save_graph(g: Graph, path: str | os.PathLike, format: str = "edge-list") -> None:
    text = format_edge_list(g) if format == "edge-list" else to_graph6(g) + "\n"
    Path(path).write_text(text)


# --- exhaustive enumeration -------------------------------------------------


def _refine(adj: list[int], colors: list[int]) -> list[int]:
    n = len(adj)
    while True:
        sig = []
        for v in range(n):
            nb = sorted(colors[u] for u in range(n) if adj[v] >> u & 1)
            sig.append((colors[v], tuple(nb)))
        order = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [order[s] for s in sig]
        if len(order) == len(set(colors)):
            return new
        colors = new


def _certificate(adj: list[int], perm: list[int]) -> int:
    # perm[k] = vertex placed at position k
    n = len(perm)
    code = 0
    for j in range(1, n):
        aj = adj[perm[j]]
        for i in range(j):
            code = (code << 1) | (aj >> perm[i] & 1)
    return code


def canonical_code(n: int, adj: list[int]) -> int:
    """Isomorphism-invariant integer code (individualization-refinement)."""
    if n <= 1:
        return 0
    best = -1

    def search(colors: list[int]) -> None:
        nonlocal best
        colors = _refine(adj, colors)
        k = len(set(colors))
        if k == n:
            perm = sorted(range(n), key=lambda v: colors[v])
            best = max(best, _certificate(adj, perm))
            return
        counts: dict[int, int] = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        target = min((c for c in counts if counts[c] > 1), key=lambda c: (counts[c], c))
        for v in range(n):
            if colors[v] == target:
                # v gets a fresh color just below the rest of its cell
                nc = [2 * c for c in colors]
                nc = [x + 1 if (colors[u] == target and u != v) else x for u, x in enumerate(nc)]
                search(nc)

    search([0] * n)
    return best


def _graph_from_bits(n: int, adj: list[int]) -> Graph:
    return Graph.from_edges(n, [(i, j) for j in range(n) for i in range(j) if adj[j] >> i & 1])


def enumerate_graphs(n: int) -> Iterator[Graph]:
    """All graphs on exactly n vertices up to isomorphism.

    Vertex augmentation from the (n-1)-vertex list with canonical-code
    deduplication.
    """
    if n == 0:
        yield Graph(0, ())
        return
    level = {0: [0]}
    for k in range(2, n + 1):
        nxt: dict[int, list[int]] = {}
        for adj in level.values():
            for mask in range(1 << (k - 1)):
                new = [a | ((mask >> i & 1) << (k - 1)) for i, a in enumerate(adj)] + [mask]
                code = canonical_code(k, new)
                if code not in nxt:
                    nxt[code] = new
        level = nxt
    for code in sorted(level):
        yield _graph_from_bits(n, level[code])


def default_cache_dir() -> Path:
    root = os.environ.get("SPECTRAL_TURAN_CACHE")
    if root:
        return Path(root)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "spectral_turan"


def exhaustive_corpus(max_n: int, cache_dir: str | os.PathLike | None = None, min_n: int = 1) -> list[Graph]:
    """All graphs with min_n <= n <= max_n, cached as graph6 per vertex count."""
    out: list[Graph] = []
    cache = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    for n in range(min_n, max_n + 1):
        f = cache / f"graphs{n}.g6"
        if f.exists():
            out.extend(read_graph6_lines(f.read_text()))
            continue
        gs = list(enumerate_graphs(n))
        try:
            cache.mkdir(parents=True, exist_ok=True)
            tmp = f.with_suffix(".tmp")
            tmp.write_text("".join(to_graph6(g) + "\n" for g in gs))
            tmp.replace(f)
        except OSError:
            pass
        out.extend(gs)
    return out


def write_graph6_lines(graphs: Iterable[Graph]) -> str:
    return "".join(to_graph6(g) + "\n" for g in graphs)


def all_labelled_graphs(n: int) -> Iterator[Graph]:
    """Every labelled graph on n vertices (2^(n choose 2) of them)."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph.from_edges(n, [p for k, p in enumerate(pairs) if mask >> k & 1])
