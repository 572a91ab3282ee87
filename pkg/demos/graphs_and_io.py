# Building graphs, reading and writing them, and walking the small-graph corpus.
from spectral_turan.graph import gen_turan, gen_petersen, edit_distance_template
from spectral_turan.io import to_graph6, from_graph6, parse_edge_list, exhaustive_corpus

# %% Turan graph with its part structure
t, parts = gen_turan(7, 3)
print(t, parts.sizes)
print("distance to its own template:", edit_distance_template(t, parts)[0])

# %% graph6 round trip
s = to_graph6(gen_petersen())
print("petersen:", s, from_graph6(s).m, "edges")

# %% edge lists tolerate comments and blank lines
g = parse_edge_list("# a path\n0 1\n1 2\n\n2 3\n")
print(g.n, g.m)

# %% exhaustive corpus, one entry per isomorphism class
counts = {}
for h in exhaustive_corpus(5):
    counts[h.n] = counts.get(h.n, 0) + 1
print("graphs per order:", counts)  # 1, 2, 4, 11, 34
