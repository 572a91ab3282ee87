"""Spectral Turan-type bounds for graphs with a given number of edges.

Perron eigenpairs, walk and clique counts, checkers for edge-spectral
inequalities, constructive stability certificates and experiment drivers.
"""

from .bounds import (
    BoundPreconditionError,
    BoundReport,
    SimplexVector,
    check_clique_poly,
    check_codegree_lower,
    check_edge_spectral_ess,
    check_k3_stability,
    check_max_degree,
    check_nikiforov_edge,
    check_nosal,
    check_sos_straus,
    check_stanley,
    check_walk_bound,
    motzkin_straus_opt,
)
from .counting import (
    chromatic_number,
    clique_number,
    clique_profile,
    codegree_data,
    codegree_matrix,
    cycle_spectrum,
    find_clique,
    find_k2t,
    find_kst,
    find_ktt,
    find_subgraph,
    is_f_free,
    pattern,
    triangle_hypergraph,
)
from .graph import (
    Graph,
    GraphDelta,
    GraphError,
    VertexPartition,
    apply_delta,
    complete_multipartite,
    edit_distance_template,
    gen_book,
    gen_complete,
    gen_complete_bipartite,
    gen_cycle,
    gen_empty,
    gen_gnp,
    gen_path,
    gen_petersen,
    gen_star,
    gen_turan,
    gen_wheel,
)
from .io import (
    GraphFormatError,
    enumerate_graphs,
    exhaustive_corpus,
    from_graph6,
    load_graph,
    parse_edge_list,
    save_graph,
    to_graph6,
)
from .spectral import PerronData, WalkTable, perron, rayleigh, spectral_radius, walk_table
from .stability import (
    EdgeClassification,
    PeelState,
    StabilityCertificate,
    biclique_certificate,
    bipartite_like_certificate,
    bipartize_triangle_free,
    classify_edges,
    partition_search,
    peel_clique_stability,
    prune_bad_edges,
    turan_certificate,
)

__version__ = "0.1.0"
