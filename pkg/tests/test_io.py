import networkx as nx
import pytest
from hypothesis import given

from spectral_turan.graph import Graph, gen_cycle, gen_petersen
from spectral_turan.io import (
    GraphFormatError,
    all_labelled_graphs,
    canonical_code,
    enumerate_graphs,
    exhaustive_corpus,
    format_edge_list,
    from_graph6,
    load_graph,
    parse_edge_list,
    read_graph6_lines,
    save_graph,
    to_graph6,
)

from strategies import graphs


def test_edge_list_basic():
    g = parse_edge_list("# a path\n0 1\n1 2  # trailing\n\n")
    assert g == Graph.from_edges(3, [(0, 1), (1, 2)])
    assert g.labels is None


def test_edge_list_declared_n_keeps_isolated():
    g = parse_edge_list("# n = 6\n0 1\n")
    assert g.n == 6 and g.m == 1


def test_edge_list_compacts_labels():
    g = parse_edge_list("10 30\n30 20\n")
    assert g.n == 3 and g.labels == (10, 20, 30)
    assert g.edge_set == {(0, 2), (1, 2)}


@pytest.mark.parametrize("text,line", [
    ("0 1\n1 1\n", 2),
    ("0 1\n1 0\n", 2),
    ("0 1 2\n", 1),
    ("0 x\n", 1),
    ("# n = 3\n0 3\n", 2),
])
def test_edge_list_errors_carry_line(text, line):
    with pytest.raises(GraphFormatError) as ei:
        parse_edge_list(text)
    assert ei.value.line == line
    assert f"line {line}" in str(ei.value)


@given(graphs(max_n=12))
def test_graph6_matches_networkx(g):
    s = to_graph6(g)
    h = nx.from_graph6_bytes(s.encode())
    assert h.number_of_nodes() == g.n
    assert {tuple(sorted(e)) for e in h.edges()} == g.edge_set
    assert from_graph6(s) == g


@given(graphs(max_n=10))
def test_edge_list_roundtrip(g):
    assert parse_edge_list(format_edge_list(g)) == g


def test_graph6_known_string():
    # networkx writes the Petersen graph with this header-free string
    ref = nx.to_graph6_bytes(nx.petersen_graph(), header=False).decode().strip()
    g = from_graph6(ref)
    assert g.m == 15 and set(g.degrees.tolist()) == {3}
    assert to_graph6(g) == ref


@pytest.mark.parametrize("s,pos", [("", 0), ("D?", 2), ("B~", 1), ("B" + chr(20), 1)])
def test_graph6_errors(s, pos):
    with pytest.raises(GraphFormatError) as ei:
        from_graph6(s, line=3)
    assert ei.value.line == 3
    assert ei.value.pos == pos


def test_graph6_rejects_large_n():
    with pytest.raises(GraphFormatError):
        to_graph6(Graph(63, ()))


def test_file_roundtrip(tmp_path):
    p = tmp_path / "c5.txt"
    save_graph(gen_cycle(5), p)
    assert load_graph(p) == gen_cycle(5)
    q = tmp_path / "pet.g6"
    save_graph(gen_petersen(), q, format="graph6")
    assert load_graph(q, format="graph6") == gen_petersen()
    with pytest.raises(FileNotFoundError):
        load_graph(tmp_path / "missing.txt")
    with pytest.raises(ValueError):
        load_graph(p, format="dot")


def test_read_graph6_lines_reports_line():
    with pytest.raises(GraphFormatError) as ei:
        read_graph6_lines("A_\nB!!\n")
    assert ei.value.line == 2


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 4), (4, 11), (5, 34), (6, 156), (7, 1044)])
def test_enumeration_counts(n, count, corpus7):
    # counts of unlabelled graphs, OEIS A000088
    assert sum(1 for g in corpus7 if g.n == n) == count


def test_enumeration_agrees_with_networkx_atlas(corpus7):
    # independent oracle: the graph atlas lists every graph up to 7 vertices
    atlas = [h for h in nx.graph_atlas_g() if h.number_of_nodes() >= 1]
    ours = {}
    for g in corpus7:
        ours.setdefault((g.n, g.m, tuple(sorted(g.degrees.tolist()))), []).append(g)
    theirs = {}
    for h in atlas:
        key = (h.number_of_nodes(), h.number_of_edges(), tuple(sorted(d for _, d in h.degree())))
        theirs[key] = theirs.get(key, 0) + 1
    assert {k: len(v) for k, v in ours.items()} == theirs


def test_canonical_code_is_isomorphism_invariant():
    # every labelled graph on 5 vertices lands on one of the 34 classes
    codes = set()
    for g in all_labelled_graphs(5):
        codes.add(canonical_code(5, list(g.bitsets)))
    assert len(codes) == 34


def test_enumerated_graphs_pairwise_non_isomorphic():
    gs = list(enumerate_graphs(5))
    nxs = [nx.Graph(list(g.edges)) for g in gs]
    for g, h in zip(gs, nxs):
        h.add_nodes_from(range(g.n))
    for i in range(len(nxs)):
        for j in range(i + 1, len(nxs)):
            assert not nx.is_isomorphic(nxs[i], nxs[j])


def test_corpus_cache_reused(tmp_path):
    first = exhaustive_corpus(4, cache_dir=tmp_path)
    assert (tmp_path / "graphs4.g6").exists()
    again = exhaustive_corpus(4, cache_dir=tmp_path)
    assert first == again
