import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spectral_turan.bounds import (
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
    motzkin_straus_bound,
    motzkin_straus_opt,
    ms_objective,
)
from spectral_turan.counting import clique_number, find_clique, pattern
from spectral_turan.graph import (
    Graph,
    gen_book,
    gen_complete,
    gen_complete_bipartite,
    gen_cycle,
    gen_empty,
    gen_path,
    gen_star,
    gen_turan,
    gen_wheel,
)
from spectral_turan.spectral import dense_spectral_radius, perron, walk_count

from strategies import graphs


def test_report_invariants():
    rep = BoundReport("x", 1.0, 1.0 - 5e-9)
    assert rep.holds and rep.slack == pytest.approx(-5e-9)
    assert not BoundReport("x", 1.0, 0.9).holds
    assert BoundReport("x", 1.0, 1.0 + 1e-7).equality_flag
    assert not BoundReport("x", 1.0, 2.0).equality_flag
    assert not BoundReport("x", 2.0, 1.0, hypothesis_met=False).violated
    row = BoundReport("x", 1.0, 2.0, {"r": 3}).as_row()
    assert row["param_r"] == 3 and row["numeric_tol"] == 1e-8


@pytest.mark.parametrize("a,b", [(1, 1), (2, 5), (3, 3), (4, 9)])
def test_nikiforov_equality_on_bicliques(a, b):
    rep = check_nikiforov_edge(gen_complete_bipartite(a, b)[0], 2)
    assert rep.equality_flag and rep.rhs == pytest.approx(math.sqrt(a * b))


def test_nikiforov_examples():
    rep = check_nikiforov_edge(gen_turan(6, 3)[0], 3)
    assert rep.lhs == pytest.approx(4.0) and rep.rhs == pytest.approx(4.0) and rep.equality_flag
    rep = check_nikiforov_edge(gen_cycle(5), 2)
    assert rep.lhs == pytest.approx(2.0) and rep.rhs == pytest.approx(math.sqrt(5))
    assert rep.holds and not rep.equality_flag
    with pytest.raises(BoundPreconditionError) as ei:
        check_nikiforov_edge(gen_complete(4), 2)
    assert len(ei.value.witness) == 3


@pytest.mark.parametrize("r", [3, 4])
@pytest.mark.parametrize("k", [1, 2, 5])
def test_nikiforov_equality_on_regular_turan(r, k):
    assert check_nikiforov_edge(gen_turan(k * r, r)[0], r).equality_flag


def test_nikiforov_strict_on_irregular_turan():
    rep = check_nikiforov_edge(gen_turan(7, 3)[0], 3)
    assert rep.holds and not rep.equality_flag


@given(graphs(min_m=1, max_n=9))
def test_nikiforov_holds_everywhere(g):
    r = max(2, clique_number(g))
    assert check_nikiforov_edge(g, r).holds


def test_edge_spectral_examples():
    for n, r in [(9, 3), (12, 4), (10, 3), (30, 5)]:
        rep = check_edge_spectral_ess(gen_turan(n, r)[0], gen_complete(r + 1), 0.0)
        assert rep.holds
        if n % r == 0:
            assert rep.equality_flag
    rep = check_edge_spectral_ess(gen_cycle(5), gen_complete(3), 0.0)
    assert rep.lhs == pytest.approx(4.0) and rep.rhs == pytest.approx(5.0)
    book = gen_book(6)
    rep = check_edge_spectral_ess(book, gen_complete(4), 0.0)
    assert rep.holds and rep.lhs == pytest.approx(dense_spectral_radius(book) ** 2)
    with pytest.raises(BoundPreconditionError):
        check_edge_spectral_ess(gen_cycle(6), gen_cycle(4), 0.1)
    with pytest.raises(BoundPreconditionError):
        check_edge_spectral_ess(gen_complete(4), gen_complete(3), 0.1)


def test_walk_bound_examples():
    # l = 1 is Wilf's n/2 bound for triangle-free graphs
    rep = check_walk_bound(gen_cycle(7), 2, 1)
    assert rep.rhs == pytest.approx(3.5) and rep.holds
    rep = check_walk_bound(gen_complete_bipartite(3, 5)[0], 2, 2)
    assert rep.equality_flag and rep.lhs == pytest.approx(15.0)
    rep = check_walk_bound(gen_cycle(6), 2, 4)
    assert rep.params["w_ell"] == walk_count(gen_cycle(6), 4) == 48
    assert rep.lhs == pytest.approx(16.0) and rep.rhs == pytest.approx(24.0)
    with pytest.raises(ValueError):
        check_walk_bound(gen_cycle(6), 2, 9)


def test_walk_bound_f_free_branch():
    g = gen_cycle(5)
    rep = check_walk_bound(g, 2, 3, eps=0.05, f=pattern("K3"))
    assert rep.holds and rep.params["eps"] == 0.05
    with pytest.raises(ValueError):
        check_walk_bound(g, 3, 3, eps=0.05, f=pattern("K3"))


@given(graphs(min_m=1, max_n=8), st.integers(1, 6))
def test_walk_bound_holds(g, ell):
    r = max(2, clique_number(g))
    assert check_walk_bound(g, r, ell).holds


def test_stanley_examples():
    rep = check_stanley(gen_complete(5))
    assert rep.lhs == pytest.approx(4.0) and rep.equality_flag
    rep = check_stanley(gen_cycle(4))
    assert rep.rhs == pytest.approx((math.sqrt(33) - 1) / 2) and not rep.equality_flag
    rep = check_stanley(gen_path(3))
    assert rep.lhs == pytest.approx(math.sqrt(2)) and rep.holds
    with pytest.raises(ValueError):
        check_stanley(gen_empty(3))


def test_clique_poly_examples():
    rep = check_clique_poly(gen_turan(6, 3)[0], 3)
    assert rep.lhs == pytest.approx(64.0) and rep.rhs == pytest.approx(64.0) and rep.equality_flag
    rep = check_clique_poly(gen_cycle(5), 2)
    assert (rep.lhs, rep.rhs) == (pytest.approx(4.0), 5.0)
    with pytest.raises(BoundPreconditionError):
        check_clique_poly(gen_complete(4), 3)


@given(graphs(min_m=1, max_n=9))
def test_clique_poly_with_l2_is_nosal(g):
    if find_clique(g, 3) is not None:
        return
    rep = check_clique_poly(g, 2)
    assert rep.rhs == g.m and rep.holds


def test_sos_straus_examples():
    rep = check_sos_straus(gen_turan(6, 3)[0], 3)
    assert rep.holds
    assert rep.params["chain"] == pytest.approx([2.0, 2.0, 2.0])
    with pytest.raises(BoundPreconditionError):
        check_sos_straus(gen_complete(4), 3)


def test_codegree_lower_examples():
    rep = check_codegree_lower(gen_complete_bipartite(3, 3)[0])
    assert rep.lhs == pytest.approx(1.5) and rep.rhs == pytest.approx(1.5) and rep.equality_flag
    rep = check_codegree_lower(gen_complete(3))
    assert rep.rhs == pytest.approx(4 / 3) and rep.lhs == pytest.approx(8 / 6) and rep.equality_flag
    star = gen_star(4)
    x = perron(star).x
    ref = sum(len(set(star.neighbors(i)) & set(star.neighbors(j))) * x[i] ** 2 * x[j] ** 2
              for i in range(5) for j in range(5))
    rep = check_codegree_lower(star)
    assert rep.rhs == pytest.approx(ref) and rep.holds


@given(graphs(min_m=1, max_n=9))
def test_codegree_lower_holds(g):
    assert check_codegree_lower(g).holds


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_k3_stability_tight_on_balanced_turan(k):
    rep = check_k3_stability(gen_turan(3 * k, 3)[0], 0.005)
    assert rep.hypothesis_met and rep.holds
    assert rep.rhs == k**3
    assert rep.params["lambda"] == pytest.approx(2 * k)


def test_k3_stability_examples():
    rep = check_k3_stability(gen_cycle(5), 0.005)
    assert not rep.hypothesis_met and not rep.violated
    g = gen_turan(9, 3)[0].remove_edges([(0, 3)])
    rep = check_k3_stability(g, 0.005)
    assert not rep.hypothesis_met
    assert rep.rhs == 27 - 3
    with pytest.raises(ValueError):
        check_k3_stability(gen_cycle(5), 0.02)
    with pytest.raises(BoundPreconditionError):
        check_k3_stability(gen_complete(4), 0.005)
    assert rep.params["delta"] == pytest.approx(0.005**10)


def test_max_degree_examples():
    rep = check_max_degree(gen_complete(5))
    assert rep.hypothesis_met and rep.lhs == 4 and rep.rhs == pytest.approx(5 + 10**0.99)
    rep = check_max_degree(gen_complete(4))
    assert rep.hypothesis_met and rep.rhs == pytest.approx(3 + 6**0.99)
    w = gen_wheel(6)
    rep = check_max_degree(w)
    assert rep.hypothesis_met == (dense_spectral_radius(w) > math.sqrt(12)) and rep.holds
    assert not check_max_degree(gen_star(9)).hypothesis_met


def test_nosal_contrapositive_small():
    for g in (gen_cycle(5), gen_complete_bipartite(3, 4)[0], gen_star(6)):
        assert check_nosal(g).holds


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_motzkin_straus_complete_graph(r):
    val, w = motzkin_straus_opt(gen_complete(r))
    assert val == pytest.approx(motzkin_straus_bound(r), abs=1e-9)
    assert np.allclose(w.weights, 1 / r, atol=1e-6)


def test_motzkin_straus_c5():
    val, w = motzkin_straus_opt(gen_cycle(5), iters=5000)
    # replicator dynamics approach the boundary slowly on C_5
    assert val == pytest.approx(0.25, abs=1e-3)
    assert val <= 0.25 + 1e-9


def test_motzkin_straus_empty():
    val, w = motzkin_straus_opt(gen_empty(4))
    assert val == 0.0 and abs(w.weights.sum() - 1) < 1e-12


@given(graphs(min_m=1, max_n=9), st.integers(0, 2**31))
def test_replicator_monotone_and_bounded(g, seed):
    val, w, hist = motzkin_straus_opt(g, iters=200, seed=seed, trace=True)
    assert all(b >= a - 1e-14 for a, b in zip(hist, hist[1:]))
    assert abs(w.weights.sum() - 1) < 1e-12 and np.all(w.weights >= 0)
    assert val <= motzkin_straus_bound(clique_number(g)) + 1e-9


@given(graphs(min_m=1, max_n=9))
def test_l1_scaled_perron_vector_respects_ms_bound(g):
    x = perron(g).x
    r = max(2, clique_number(g))
    assert ms_objective(g, x / x.sum()) <= motzkin_straus_bound(r) + 1e-12


def test_simplex_vector_validation():
    with pytest.raises(ValueError):
        SimplexVector(np.array([0.5, 0.6]))
    with pytest.raises(ValueError):
        SimplexVector(np.array([1.5, -0.5]))
    assert SimplexVector(np.array([0.0, 1.0])).support == [1]
    with pytest.raises(ValueError):
        motzkin_straus_opt(gen_cycle(3), iters=0)
