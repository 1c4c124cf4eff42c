from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clustercut.core import Clustering, Cnf, Graph, PointSet, SymbolicSum, kmeans_cost, minsum_cost
from clustercut.errors import InputError, ValidationError
from clustercut.generators import complete_graph, cycle_graph, random_linear_4regular_cnf, random_points
from clustercut.oracles import Verdict, brute_kmeans, brute_maxcut, brute_minsum, brute_nae_sat
from clustercut.reductions import (GadgetGraph, assignment_cut, badedge_bound_sampled, coloring_to_kmeans,
                                   conservation_terms, embed_graph, even_code_cnf, literal_vertex,
                                   maxcut_to_2means, maxcut_to_2minsum, minsum_to_maxcut,
                                   nae3sat_to_maxcut, orient_edges, predicted_2means_cost,
                                   predicted_2minsum_cost, predicted_kmeans_cost, verify_badedge_bound)

EDGE = Graph(2, [(0, 1)], regular_degree=1)


def test_embedding_rows():
    pts = embed_graph(cycle_graph(4), orient_edges(cycle_graph(4)))
    assert pts.d == 4
    # one +-1 entry per incident edge
    assert (np.abs(pts.coords).sum(axis=1) == 2).all()
    assert (pts.coords.sum(axis=0) == 0).all()


def test_single_edge_embedding():
    inst = maxcut_to_2means(EDGE, 0)
    assert sorted(inst.points.coords.tolist()) == [[-1], [1]]
    assert inst.threshold == 0
    assert brute_kmeans(inst.points, 2).optimum == 0


def test_maxcut_to_2means_thresholds():
    c4 = maxcut_to_2means(cycle_graph(4), 0)
    assert c4.threshold == 4 and c4.points.d == 4
    assert brute_kmeans(c4.points, 2).optimum == 4
    k4 = maxcut_to_2means(complete_graph(4), 2)
    assert k4.threshold == 8
    assert brute_kmeans(k4.points, 2).optimum == 8


def test_predicted_2means_examples():
    assert predicted_2means_cost(cycle_graph(4), (0, 1, 0, 1)) == 4
    assert predicted_2means_cost(cycle_graph(4), (0, 0, 1, 1)) == 6
    with pytest.raises(InputError):
        predicted_2means_cost(complete_graph(4), (0, 0, 0, 0))


def test_c4_opposite_pairs_costs():
    pts = embed_graph(cycle_graph(4), orient_edges(cycle_graph(4)))
    assert kmeans_cost(pts, Clustering((0, 1, 0, 1))) == 4
    assert minsum_cost(pts, Clustering((0, 1, 0, 1)), 1) == 8


@given(st.integers(0, 10**6))
@settings(max_examples=20, deadline=None)
def test_identities_survive_random_orientation(seed):
    g = complete_graph(5)
    pts = embed_graph(g, orient_edges(g, np.random.default_rng(seed)))
    for bits in itertools.product((0, 1), repeat=4):
        part = (0,) + bits
        if not any(part):
            continue
        assert kmeans_cost(pts, Clustering(part, 2)) == predicted_2means_cost(g, part)
        assert minsum_cost(pts, Clustering(part, 2), 3) == predicted_2minsum_cost(g, part, 3)


def test_coloring_thresholds():
    k3 = coloring_to_kmeans(complete_graph(3), 3)
    assert k3.threshold == 0 and brute_kmeans(k3.points, 3).optimum == 0
    c5 = coloring_to_kmeans(cycle_graph(5), 3)
    assert c5.threshold == 4 and c5.points.d == 5
    assert brute_kmeans(c5.points, 3).optimum == 4
    # nd - kd with n=4, d=3, k=3; K4 is not 3-colourable so the optimum is above it
    k4 = coloring_to_kmeans(complete_graph(4), 3)
    assert k4.threshold == 3
    assert brute_kmeans(k4.points, 3).optimum == 4


def test_predicted_kmeans_cost_matches_embedding():
    g = cycle_graph(6)
    pts = embed_graph(g, orient_edges(g))
    for labels in itertools.product(range(3), repeat=6):
        if len(set(labels)) == 3:
            assert kmeans_cost(pts, Clustering(labels, 3)) == predicted_kmeans_cost(g, labels, 3)


def test_reductions_reject_bad_graphs():
    path = Graph(3, [(0, 1), (1, 2)])
    for build in (lambda g: maxcut_to_2means(g, 0), lambda g: coloring_to_kmeans(g, 3),
                  lambda g: maxcut_to_2minsum(g, 0, 1)):
        with pytest.raises(ValidationError):
            build(path)
    with pytest.raises(InputError):
        maxcut_to_2means(cycle_graph(5), 0)
    with pytest.raises(InputError):
        coloring_to_kmeans(cycle_graph(5), 1)


def test_maxcut_to_2minsum_thresholds():
    assert maxcut_to_2minsum(cycle_graph(4), 0, 1).threshold == 8
    assert maxcut_to_2minsum(EDGE, 0, 1).threshold == 0
    k4 = maxcut_to_2minsum(complete_graph(4), 2, 2)
    assert k4.threshold == SymbolicSum.from_radicands(2, {6: 2, 8: 2}) - SymbolicSum.from_radicands(2, {6: 2})
    assert k4.threshold == SymbolicSum.from_radicands(2, {2: 4})
    assert brute_minsum(k4.points, 2, 2).optimum == k4.threshold
    assert brute_minsum(maxcut_to_2minsum(cycle_graph(4), 0, 1).points, 2, 1).optimum == 8


def test_predicted_2minsum_examples():
    assert predicted_2minsum_cost(cycle_graph(4), (0, 1, 0, 1), 1) == 8
    # at p=1, d=2 the edge and non-edge distances coincide (both 4)
    assert predicted_2minsum_cost(cycle_graph(4), (0, 0, 1, 1), 1) == 8
    with pytest.raises(InputError):
        predicted_2minsum_cost(complete_graph(4), (1, 1, 1, 1), 1)


def test_minsum_to_maxcut_line():
    pts = PointSet([[0], [1], [4], [5]])
    g = minsum_to_maxcut(pts, 1)
    assert g.total_weight == 18
    assert brute_maxcut(g).optimum == 16
    within, cut, total = conservation_terms(pts, (0, 0, 1, 1), 1)
    assert (within, cut, total) == (2, 16, 18)
    assert brute_minsum(pts, 2, 1).optimum == 2


def test_minsum_to_maxcut_degenerate():
    g = minsum_to_maxcut(PointSet([[3, 3]] * 4), 1)
    assert g.total_weight == 0
    assert minsum_to_maxcut(PointSet([[0], [7]]), 1).edges == ((0, 1, 7),)
    scaled = minsum_to_maxcut(PointSet([[0, 0], [1, 1]]), 2, scale=1000)
    assert scaled.edges == ((0, 1, 1414),)


@given(st.integers(0, 10**6), st.sampled_from([1, 2, 3]))
@settings(max_examples=25, deadline=None)
def test_conservation_random(seed, p):
    pts = random_points(6, 3, 4, seed)
    for bits in itertools.product((0, 1), repeat=5):
        if not any(bits):
            continue
        within, cut, total = conservation_terms(pts, (0,) + bits, p)
        assert within + cut == total


# -- gadget -----------------------------------------------------------------


def test_literal_vertex_layout():
    assert literal_vertex(0, 0, 0) == 0
    assert literal_vertex(0, 1, 3) == 7
    assert literal_vertex(2, 1, 0) == 20


def test_even_code_gadget_shape():
    gadget = nae3sat_to_maxcut(even_code_cnf())
    g = gadget.graph
    assert g.n_vertices == 24 and g.m == 144 and g.degree_if_regular() == 12
    assert gadget.t == 32
    assert sum(len(es) for _, es in gadget.family_edges()) == 144
    # complementary clause triangles coincide, so some edges are parallel
    assert len(set(g.edges)) == 96


def test_gadget_rejects_invalid_cnf():
    cnf = Cnf(3, [[(0, 0), (1, 0), (2, 0)], [(0, 0), (1, 0), (2, 1)]])
    with pytest.raises(ValidationError):
        nae3sat_to_maxcut(cnf)


def test_sidecar_round_trip():
    gadget = nae3sat_to_maxcut(even_code_cnf())
    again = GadgetGraph.from_sidecar(gadget.graph, gadget.sidecar())
    assert again.cnf.clauses == gadget.cnf.clauses
    assert again.t == gadget.t


def test_badedge_bound_sampled_even_code():
    gadget = nae3sat_to_maxcut(even_code_cnf())
    res = badedge_bound_sampled(gadget, 20_000, np.random.default_rng(0))
    assert res["violations"] == 0


def _nae_satisfiable_cnf():
    for seed in range(200):
        cnf = random_linear_4regular_cnf(6, seed)
        verdict, values = brute_nae_sat(cnf)
        if verdict is Verdict.YES:
            return cnf, values
    raise AssertionError("no nae-satisfiable CNF in 200 seeds")


def test_satisfying_assignment_gives_tight_cut():
    cnf, values = _nae_satisfiable_cnf()
    gadget = nae3sat_to_maxcut(cnf)
    rep = verify_badedge_bound(gadget, assignment_cut(gadget, values))
    assert rep["balanced"] and rep["beta"] == 8 * cnf.m == gadget.t
    assert rep["equality"] and rep["families_tight"] and rep["iff_holds"]


def test_equality_characterisation_on_random_balanced_cuts():
    cnf, _ = _nae_satisfiable_cnf()
    gadget = nae3sat_to_maxcut(cnf)
    rng = np.random.default_rng(1)
    n = gadget.graph.n_vertices
    for _ in range(2000):
        part = np.zeros(n, dtype=int)
        part[rng.permutation(n)[: n // 2]] = 1
        rep = verify_badedge_bound(gadget, part.tolist())
        assert rep["holds"] and rep["iff_holds"]


def test_embedding_costs_are_exact_fractions():
    g = complete_graph(5)
    cost = predicted_2means_cost(g, (0, 0, 1, 1, 1))
    assert isinstance(cost, Fraction)
    assert cost == 5 * 4 - 2 * 4 + 2 * (Fraction(1, 2) + Fraction(3, 3))
