from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clustercut.config import Caps
from clustercut.core import Clustering, PointSet, WeightedGraph, cut_weight, kmeans_cost, minsum_cost
from clustercut.errors import CapError
from clustercut.generators import complete_graph, cycle_graph, petersen_graph, random_points
from clustercut.oracles import (Verdict, _k_partitions, brute_balanced_maxcut, brute_coloring,
                                brute_kmeans, brute_maxcut, brute_minsum, brute_nae_sat)
from clustercut.reductions import even_code_cnf

STIRLING2 = {(4, 2): 7, (5, 3): 25, (6, 3): 90, (7, 2): 63, (6, 4): 65}


@pytest.mark.parametrize("n, k", sorted(STIRLING2))
def test_partition_counts(n, k):
    rows = _k_partitions(n, k)
    assert len(rows) == STIRLING2[(n, k)]
    assert len({tuple(r) for r in rows}) == len(rows)


def _slow_kmeans(points: PointSet, k: int) -> Fraction:
    best = None
    for labels in itertools.product(range(k), repeat=points.n):
        if len(set(labels)) != k:
            continue
        c = kmeans_cost(points, Clustering(labels, k))
        best = c if best is None else min(best, c)
    return best


@given(st.integers(0, 10**6), st.integers(2, 7), st.integers(1, 3), st.integers(2, 3))
@settings(max_examples=40, deadline=None)
def test_brute_kmeans_matches_plain_enumeration(seed, n, d, k):
    if k > n:
        k = n
    p = random_points(n, d, 4, seed)
    rep = brute_kmeans(p, k)
    assert rep.optimum == _slow_kmeans(p, k)
    assert kmeans_cost(p, Clustering(rep.witness, k)) == rep.optimum


def test_brute_kmeans_rectangle():
    rep = brute_kmeans(PointSet([[0, 0], [0, 1], [2, 0], [2, 1]]), 2)
    assert rep.optimum == 1
    assert rep.witness == (0, 0, 1, 1)
    assert rep.to_json()["optimum_num"] == "1"


def test_brute_kmeans_respects_caps():
    with pytest.raises(CapError):
        brute_kmeans(random_points(9, 2, 3, 0), 2, Caps(oracle_n_k2=8))


def test_brute_minsum_line():
    rep = brute_minsum(PointSet([[0], [1], [3]]), 2, 1)
    assert rep.optimum == 1
    rep = brute_minsum(PointSet([[0], [1], [4], [5]]), 2, 1)
    assert rep.optimum == 2


@given(st.integers(0, 10**6), st.integers(2, 7), st.sampled_from([1, 2, 3]))
@settings(max_examples=30, deadline=None)
def test_brute_minsum_matches_plain_enumeration(seed, n, p):
    pts = random_points(n, 2, 3, seed)
    best = min(minsum_cost(pts, Clustering((0,) + bits, 2), p)
               for bits in itertools.product((0, 1), repeat=n - 1) if any(bits))
    assert brute_minsum(pts, 2, p).optimum == best


def test_brute_maxcut_examples():
    tri = WeightedGraph(3, [(0, 1, 1), (1, 2, 2), (0, 2, 3)])
    assert brute_maxcut(tri).optimum == 5
    assert brute_maxcut(complete_graph(4).as_weighted()).optimum == 4
    assert brute_maxcut(cycle_graph(6).as_weighted()).optimum == 6
    assert brute_maxcut(petersen_graph().as_weighted()).optimum == 12


@given(st.integers(0, 10**6), st.integers(1, 8))
@settings(max_examples=30, deadline=None)
def test_brute_maxcut_witness(seed, n):
    rng = np.random.default_rng(seed)
    edges = [(u, v, int(rng.integers(0, 9))) for u, v in itertools.combinations(range(n), 2)
             if rng.random() < 0.6]
    g = WeightedGraph(n, edges)
    rep = brute_maxcut(g)
    assert cut_weight(g, rep.witness) == rep.optimum
    assert rep.optimum == max(cut_weight(g, (0,) + b) for b in itertools.product((0, 1), repeat=max(n - 1, 0)))


def test_balanced_maxcut_verdicts():
    assert brute_balanced_maxcut(complete_graph(4), 2) is Verdict.YES
    assert brute_balanced_maxcut(complete_graph(4), 1) is Verdict.NO
    assert brute_balanced_maxcut(cycle_graph(4), 0) is Verdict.YES
    # C6 with t=1: balanced cuts have 0 or 2 bad edges, never exactly 1
    assert brute_balanced_maxcut(cycle_graph(6), 1) is Verdict.NEITHER


def test_coloring():
    assert brute_coloring(cycle_graph(5), 3)[0] is Verdict.YES
    assert brute_coloring(cycle_graph(5), 2)[0] is Verdict.NO
    assert brute_coloring(complete_graph(4), 3)[0] is Verdict.NO
    verdict, colour = brute_coloring(petersen_graph(), 3)
    assert verdict is Verdict.YES
    assert all(colour[u] != colour[v] for u, v in petersen_graph().edges)


def test_nae_sat_even_code_is_unsatisfiable():
    assert brute_nae_sat(even_code_cnf()) == (Verdict.NO, None)
