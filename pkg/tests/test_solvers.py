from __future__ import annotations

import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clustercut.config import Caps
from clustercut.core import Clustering, PointSet, WeightedGraph, cut_weight, kmeans_cost, minsum_cost
from clustercut.errors import CapError, InputError, WeightBoundError
from clustercut.generators import cycle_graph, petersen_graph, random_points
from clustercut.matmul import Kernel, OpCounter
from clustercut.oracles import brute_kmeans, brute_maxcut, brute_minsum
from clustercut.solvers import (SplitSpec, build_csp_for_split, contiguous_groups,
                                heuristic_upper_bound, solve_2means_exact, solve_2minsum_exact,
                                solve_maxcut_fast)

RECT = PointSet([[0, 0], [0, 1], [4, 0], [4, 1]])


def test_rectangle():
    rep = solve_2means_exact(RECT)
    assert rep.optimum == 1
    assert rep.witness == (0, 0, 1, 1)


def test_two_points():
    rep = solve_2means_exact(PointSet([[0], [9]]))
    assert rep.optimum == 0


def test_identical_points():
    assert solve_2means_exact(PointSet([[2, 2]] * 7)).optimum == 0


@given(st.integers(0, 2**32), st.integers(2, 9), st.integers(1, 4))
@settings(max_examples=60, deadline=None)
def test_matches_brute_force(seed, n, d):
    pts = random_points(n, d, 3, seed)
    rep = solve_2means_exact(pts, debug=True)
    assert rep.optimum == brute_kmeans(pts, 2).optimum
    assert kmeans_cost(pts, Clustering(rep.witness, 2)) == rep.optimum


@pytest.mark.parametrize("kernel", list(Kernel))
def test_kernels_agree(kernel):
    for seed in range(5):
        pts = random_points(10, 3, 3, seed)
        caps = Caps(strassen_crossover=2)
        assert solve_2means_exact(pts, kernel, caps).optimum == brute_kmeans(pts, 2).optimum


def test_report_independent_of_thread_count():
    pts = random_points(12, 3, 5, 42)
    reports = [json.dumps(solve_2means_exact(pts, threads=t).to_json(), sort_keys=True)
               for t in (1, 2, 4)]
    assert reports[0] == reports[1] == reports[2]


def test_dense_targets_on_tiny_inputs():
    for seed in range(10):
        pts = random_points(5, 2, 1, seed)
        dense = solve_2means_exact(pts, targets="dense")
        assert dense.optimum == solve_2means_exact(pts).optimum == brute_kmeans(pts, 2).optimum


def test_union_domain_on_tiny_inputs():
    for seed in range(10):
        pts = random_points(6, 2, 2, seed)
        assert solve_2means_exact(pts, union_domain=True).optimum == brute_kmeans(pts, 2).optimum


def test_counters_and_stats():
    counter, stats = OpCounter(), {}
    rep = solve_2means_exact(random_points(9, 2, 3, 1), counter=counter, stats=stats)
    assert stats["queries"] == rep.explored > 0
    assert stats["max_domain_sum"] <= 3 * 2 ** 3
    assert rep.counters["mm_calls"] == counter.calls


def test_caps_and_guards():
    with pytest.raises(InputError):
        solve_2means_exact(PointSet([[1]]))
    with pytest.raises(CapError):
        solve_2means_exact(random_points(9, 2, 3, 0), caps=Caps(solver_max_n=8))
    big = PointSet([[2**30, 0], [0, 2**30], [5, 5]])
    with pytest.raises(WeightBoundError):
        solve_2means_exact(big)
    with pytest.raises(InputError):
        solve_2means_exact(RECT, targets="sparse")


def test_split_spec_validation():
    groups = contiguous_groups(6)
    assert groups == ((0, 1), (2, 3), (4, 5))
    with pytest.raises(InputError):
        SplitSpec(groups, (3, 0, 0))
    with pytest.raises(InputError):
        SplitSpec(groups, (0, 0, 0))
    assert SplitSpec(groups, (1, 2, 0)).domain_sizes() == (2, 1, 1)


def test_csp_encoding_reproduces_cost():
    pts = random_points(7, 3, 4, 3)
    groups = contiguous_groups(7)
    for a in [(1, 1, 0), (2, 0, 1), (1, 1, 1), (3, 2, 1)]:
        split = SplitSpec(groups, a)
        inst = build_csp_for_split(pts, split)
        for combo in itertools.product(*(range(len(dm)) for dm in inst.domains)):
            k_v, k_e = inst.evaluate(combo)
            assign = [0] * 7
            for _, b_side in inst.labels(combo):
                for x in b_side:
                    assign[x] = 1
            expected = kmeans_cost(pts, Clustering(assign, 2))
            assert expected * split.size_a * split.size_b == k_v + k_e


def test_heuristic_bound_is_feasible():
    for seed in range(10):
        pts = random_points(8, 3, 3, seed)
        bound, assign = heuristic_upper_bound(pts)
        assert kmeans_cost(pts, Clustering(assign, 2)) == bound
        assert bound >= brute_kmeans(pts, 2).optimum


def test_maxcut_examples():
    assert solve_maxcut_fast(petersen_graph().as_weighted()).optimum == 12
    assert solve_maxcut_fast(cycle_graph(6).as_weighted()).optimum == 6
    tri = WeightedGraph(3, [(0, 1, 1), (1, 2, 2), (0, 2, 3)])
    rep = solve_maxcut_fast(tri)
    assert rep.optimum == 5 and cut_weight(tri, rep.witness) == 5
    assert solve_maxcut_fast(WeightedGraph(1, [])).optimum == 0


@given(st.integers(0, 2**32), st.integers(2, 12), st.floats(0.2, 1.0))
@settings(max_examples=40, deadline=None)
def test_maxcut_matches_brute(seed, n, density):
    rng = np.random.default_rng(seed)
    edges = [(u, v, int(rng.integers(0, 20))) for u, v in itertools.combinations(range(n), 2)
             if rng.random() < density]
    g = WeightedGraph(n, edges)
    rep = solve_maxcut_fast(g)
    assert rep.optimum == brute_maxcut(g).optimum
    assert cut_weight(g, rep.witness) == rep.optimum


def test_2minsum_l1_line():
    rep = solve_2minsum_exact(PointSet([[0], [1], [4], [5]]), 1)
    assert rep.optimum == 2
    assert rep.counters["scaled_total"] == 18 and rep.counters["scaled_cut"] == 16


def test_2minsum_never_returns_an_empty_cluster():
    rep = solve_2minsum_exact(PointSet([[1, 1]] * 5), 1)
    assert rep.optimum == 0 and 0 < sum(rep.witness) < 5


@given(st.integers(0, 2**32), st.integers(2, 9))
@settings(max_examples=30, deadline=None)
def test_2minsum_matches_brute_l1(seed, n):
    pts = random_points(n, 3, 3, seed)
    assert solve_2minsum_exact(pts, 1).optimum == brute_minsum(pts, 2, 1).optimum


def test_2minsum_l2_reports_exact_cost_of_its_cut():
    for seed in range(10):
        pts = random_points(7, 2, 3, seed)
        rep = solve_2minsum_exact(pts, 2)
        assert rep.optimum == minsum_cost(pts, Clustering(rep.witness, 2), 2)
        assert rep.optimum == brute_minsum(pts, 2, 2).optimum
