"""Instance generators for the hardness reductions, with their closed-form costs.

Graph to point set: orient every edge, then give vertex ``v`` the point
``p_v`` in R^m with ``+1`` on its outgoing edges, ``-1`` on incoming ones and
``0`` elsewhere.  The same embedding serves Balanced Max-Cut -> 2-means,
k-colouring -> k-means and Balanced Max-Cut -> 2-min-sum; only the decision
threshold differs.  2-min-sum -> Max-Cut is the complete graph of pairwise
distances, and Linear 4-Regular NAE-3-SAT -> Balanced Max-Cut is the
literal-copy gadget built by :func:`nae3sat_to_maxcut`.
"""
from __future__ import annotations

import hashlib
import itertools
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (Clustering, Cnf, Graph, PointSet, SymbolicSum, WeightedGraph, _check_partition,
                   cut_weight, minsum_cost)
from .errors import InputError, ValidationError

_BLOCK = 1 << 20


def _graph_hash(graph: Graph) -> str:
    h = hashlib.sha256(f"{graph.n_vertices}:{graph.edges}".encode())
    return h.hexdigest()[:16]


@dataclass(frozen=True, eq=False)
class EmbeddedInstance:
    points: PointSet
    threshold: Fraction | SymbolicSum
    provenance: dict
    edge_orientation: tuple[tuple[int, int], ...]

    def to_json(self) -> dict:
        thr = self.threshold
        if isinstance(thr, SymbolicSum):
            t = thr.to_json()
        else:
            t = {"num": str(thr.numerator), "den": str(thr.denominator)}
        return {"threshold": t, "provenance": self.provenance,
                "edge_orientation": [list(e) for e in self.edge_orientation]}


def orient_edges(graph: Graph, rng: np.random.Generator | None = None) -> tuple[tuple[int, int], ...]:
    """Each edge as (tail, head): low-to-high index, or a random direction when ``rng`` is given."""
    out = []
    for u, v in graph.edges:
        if rng is not None and rng.integers(2):
            u, v = v, u
        out.append((u, v))
    return tuple(out)


def embed_graph(graph: Graph, orientation: Sequence[tuple[int, int]]) -> PointSet:
    coords = np.zeros((graph.n_vertices, len(orientation)), dtype=np.int64)
    for e, (tail, head) in enumerate(orientation):
        coords[tail, e] = 1
        coords[head, e] = -1
    return PointSet(coords)


def _regular_simple(graph: Graph) -> int:
    if graph.allow_parallel and len(set(graph.edges)) != len(graph.edges):
        raise ValidationError("the embedding needs a simple graph", ("simple",))
    if graph.m == 0:
        raise ValidationError("the embedding needs at least one edge", ("nonempty",))
    return graph.require_regular()


def _embedding(graph: Graph, kind: str, threshold, params: dict,
               rng: np.random.Generator | None) -> EmbeddedInstance:
    orient = orient_edges(graph, rng)
    prov = {"reduction": kind, "source_hash": _graph_hash(graph), **params}
    return EmbeddedInstance(embed_graph(graph, orient), threshold, prov, orient)


def maxcut_to_2means(graph: Graph, t: int, rng: np.random.Generator | None = None) -> EmbeddedInstance:
    """Threshold ``n d - 2 d + 4 t / n``."""
    d = _regular_simple(graph)
    n = graph.n_vertices
    if n % 2:
        raise InputError("Balanced Max-Cut needs an even number of vertices")
    thr = Fraction(n * d - 2 * d) + Fraction(4 * t, n)
    return _embedding(graph, "maxcut-to-2means", thr, {"t": t}, rng)


def coloring_to_kmeans(graph: Graph, k: int, rng: np.random.Generator | None = None) -> EmbeddedInstance:
    """Threshold ``n d - k d``."""
    if k < 2:
        raise InputError("k must be at least 2")
    d = _regular_simple(graph)
    n = graph.n_vertices
    return _embedding(graph, "coloring-to-kmeans", Fraction(n * d - k * d), {"k": k}, rng)


def _two_distances(d: int, p: int) -> tuple[int, int]:
    """Radicands of the non-edge and edge distances: ``2d`` and ``2d + 2^p - 2``."""
    return 2 * d, 2 * d + 2**p - 2


def maxcut_to_2minsum(graph: Graph, t: int, p: int = 1,
                      rng: np.random.Generator | None = None) -> EmbeddedInstance:
    """Threshold ``(2d)^(1/p) (n^2 - 2n)/4 + t ((2d + 2^p - 2)^(1/p) - (2d)^(1/p))``."""
    if p < 1:
        raise InputError("p must be >= 1")
    d = _regular_simple(graph)
    n = graph.n_vertices
    if n % 2:
        raise InputError("Balanced Max-Cut needs an even number of vertices")
    far, near = _two_distances(d, p)
    thr = SymbolicSum.from_radicands(p, {far: Fraction(n * n - 2 * n, 4) - t}) \
        + SymbolicSum.from_radicands(p, {near: t})
    return _embedding(graph, "maxcut-to-2minsum", thr, {"t": t, "p": p}, rng)


def _sides(graph: Graph, partition) -> tuple[tuple[int, ...], list[int], list[int]]:
    part = _check_partition(graph.n_vertices, partition)
    sizes = [part.count(0), part.count(1)]
    if 0 in sizes:
        raise InputError("both sides of the partition must be nonempty")
    bad = [0, 0]
    for u, v in graph.edges:
        if part[u] == part[v]:
            bad[part[u]] += 1
    return part, sizes, bad


def predicted_2means_cost(graph: Graph, partition) -> Fraction:
    """``n d - 2 d + 2 sum_j r_j / |C_j|`` with ``r_j`` the bad edges inside side j."""
    d = graph.require_regular()
    _, sizes, bad = _sides(graph, partition)
    n = graph.n_vertices
    return Fraction(n * d - 2 * d) + 2 * sum(Fraction(r, s) for r, s in zip(bad, sizes))


def predicted_kmeans_cost(graph: Graph, assignment: Sequence[int], k: int) -> Fraction:
    """k-cluster version: ``n d - k d + 2 sum_j r_j / |C_j|``."""
    d = graph.require_regular()
    a = tuple(int(x) for x in assignment)
    sizes = [a.count(j) for j in range(k)]
    if len(a) != graph.n_vertices or 0 in sizes:
        raise InputError("need a full assignment with every cluster nonempty")
    bad = [0] * k
    for u, v in graph.edges:
        if a[u] == a[v]:
            bad[a[u]] += 1
    n = graph.n_vertices
    return Fraction(n * d - k * d) + 2 * sum(Fraction(r, s) for r, s in zip(bad, sizes))


def predicted_2minsum_cost(graph: Graph, partition, p: int = 1) -> SymbolicSum:
    """``(2d)^(1/p)/2 (|V1|^2 + |V2|^2 - n) + (r1 + r2)((2d+2^p-2)^(1/p) - (2d)^(1/p))``."""
    d = graph.require_regular()
    _, sizes, bad = _sides(graph, partition)
    n = graph.n_vertices
    far, near = _two_distances(d, p)
    r = sum(bad)
    return SymbolicSum.from_radicands(p, {far: Fraction(sizes[0] ** 2 + sizes[1] ** 2 - n, 2) - r}) \
        + SymbolicSum.from_radicands(p, {near: r})


def minsum_to_maxcut(points: PointSet, p: int = 1, scale: int = 10**6) -> WeightedGraph:
    """Complete graph with ``w(u, v) = ||p_u - p_v||_p``.

    Exact for ``p = 1``; for ``p >= 2`` weights are ``round(scale * distance)``.
    """
    if p < 1:
        raise InputError("p must be >= 1")
    rad = points.lp_radicands(p)
    edges = []
    for u, v in itertools.combinations(range(points.n), 2):
        r = int(rad[u, v])
        if p == 1:
            w = r
        else:
            w = int(SymbolicSum.from_radicands(p, {r: scale}).to_decimal().to_integral_value())
        edges.append((u, v, w))
    return WeightedGraph(points.n, edges)


def conservation_terms(points: PointSet, partition, p: int = 1) -> tuple[SymbolicSum, SymbolicSum, SymbolicSum]:
    """``(min-sum cost, cut weight, total weight)`` of a 2-partition, all exact.

    For ``p = 1`` the cut and total come from the integer graph built by
    :func:`minsum_to_maxcut`; for larger ``p`` from the exact distances.
    """
    part = _check_partition(points.n, partition)
    within = minsum_cost(points, Clustering(part, 2), p)
    if p == 1:
        graph = minsum_to_maxcut(points, 1)
        return (within, SymbolicSum.constant(cut_weight(graph, part)),
                SymbolicSum.constant(graph.total_weight))
    rad = points.lp_radicands(p)
    cut: dict[int, int] = {}
    total: dict[int, int] = {}
    for u, v in itertools.combinations(range(points.n), 2):
        r = int(rad[u, v])
        total[r] = total.get(r, 0) + 1
        if part[u] != part[v]:
            cut[r] = cut.get(r, 0) + 1
    return within, SymbolicSum.from_radicands(p, cut), SymbolicSum.from_radicands(p, total)


# ---------------------------------------------------------------------------
# NAE-3-SAT gadget


def literal_vertex(var: int, sign: int, copy: int) -> int:
    """Vertex index of copy ``copy`` (0..3) of literal ``x_{var, sign}``."""
    return (2 * var + sign) * 4 + copy


@dataclass(frozen=True, eq=False)
class GadgetGraph:
    """Gadget multigraph plus its edge families.

    ``clause_triangles[j][k]`` is ``(A0, A1)``: the triangle on copy ``k`` of
    clause ``j``'s literals and the one on their complements.
    ``variable_bicliques[i]`` is the K_{4,4} between copies of ``x_i`` and
    its negation.
    """

    graph: Graph
    t: int
    cnf: Cnf
    clause_triangles: tuple[tuple[tuple[tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]], ...], ...]
    variable_bicliques: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def m(self) -> int:
        return self.cnf.m

    def family_edges(self) -> list[tuple[str, tuple[tuple[int, int], ...]]]:
        out = []
        for j, per_clause in enumerate(self.clause_triangles):
            for k, (a0, a1) in enumerate(per_clause):
                out.append((f"A[{j},{k}]", a0 + a1))
        for i, b in enumerate(self.variable_bicliques):
            out.append((f"B[{i}]", b))
        return out

    def sidecar(self) -> dict:
        return {
            "reduction": "nae3sat-to-maxcut",
            "t": self.t,
            "n_vars": self.cnf.n_vars,
            "m": self.m,
            "vertex_index": "4*(2*var + sign) + copy",
            "clause_triangles": [[{"A0": [list(e) for e in a0], "A1": [list(e) for e in a1]}
                                  for a0, a1 in per] for per in self.clause_triangles],
            "variable_bicliques": [[list(e) for e in b] for b in self.variable_bicliques],
        }

    @classmethod
    def from_sidecar(cls, graph: Graph, side: dict) -> "GadgetGraph":
        tri = tuple(tuple((tuple(tuple(e) for e in c["A0"]), tuple(tuple(e) for e in c["A1"]))
                          for c in per) for per in side["clause_triangles"])
        bic = tuple(tuple(tuple(e) for e in b) for b in side["variable_bicliques"])
        clauses = []
        for per in tri:
            a0 = per[0][0]
            lits = sorted({x for e in a0 for x in e})
            clauses.append([((x // 4) // 2, (x // 4) % 2) for x in lits])
        cnf = Cnf(int(side["n_vars"]), clauses)
        gadget = cls(graph, int(side["t"]), cnf, tri, bic)
        _check_families(gadget)
        return gadget


def _check_families(g: GadgetGraph) -> None:
    fam = sorted(e for _, es in g.family_edges() for e in es)
    if fam != sorted(g.graph.edges):
        raise ValidationError("edge families do not partition the edge multiset", ("families",))


def nae3sat_to_maxcut(cnf: Cnf) -> GadgetGraph:
    """Four copies of every literal; twin triangles per clause and copy; K_{4,4} per variable.

    Complementary twin triangles of different clauses can coincide (e.g. the
    clauses ``(x, ~y, ~z)`` and ``(~x, y, ~z)``), so the result is a
    multigraph; degrees and edge counts include multiplicity.
    """
    cnf.validate_linear_4_regular()
    tri = []
    for clause in cnf.clauses:
        per = []
        for k in range(4):
            a0 = tuple(tuple(sorted((literal_vertex(v1, s1, k), literal_vertex(v2, s2, k))))
                       for (v1, s1), (v2, s2) in ((clause[0], clause[1]), (clause[1], clause[2]),
                                                  (clause[2], clause[0])))
            a1 = tuple(tuple(sorted((literal_vertex(v1, 1 - s1, k), literal_vertex(v2, 1 - s2, k))))
                       for (v1, s1), (v2, s2) in ((clause[0], clause[1]), (clause[1], clause[2]),
                                                  (clause[2], clause[0])))
            per.append((a0, a1))
        tri.append(tuple(per))
    bic = tuple(tuple((literal_vertex(i, 0, k), literal_vertex(i, 1, l)) for k in range(4) for l in range(4))
                for i in range(cnf.n_vars))
    edges = [e for per in tri for a0, a1 in per for e in a0 + a1] + [e for b in bic for e in b]
    graph = Graph(8 * cnf.n_vars, edges, regular_degree=12, allow_parallel=True)
    gadget = GadgetGraph(graph, 8 * cnf.m, cnf, tuple(tri), bic)
    _check_families(gadget)
    return gadget


def assignment_cut(gadget: GadgetGraph, values: Sequence[int]) -> tuple[int, ...]:
    """Side of ``(x_{i,a}, k)`` is the truth value ``values[i] XOR a`` of its literal."""
    n = gadget.cnf.n_vars
    part = [0] * (8 * n)
    for i in range(n):
        for a in (0, 1):
            for k in range(4):
                part[literal_vertex(i, a, k)] = int(values[i]) ^ a
    return tuple(part)


def verify_badedge_bound(gadget: GadgetGraph, partition) -> dict:
    """Check ``beta >= 8m + 2 ||V0| - |V1||`` and the equality characterisation."""
    part = _check_partition(gadget.graph.n_vertices, partition)
    v1 = sum(part)
    v0 = len(part) - v1
    fam_bad = {name: sum(1 for u, v in es if part[u] == part[v]) for name, es in gadget.family_edges()}
    beta = sum(fam_bad.values())
    bound = 8 * gadget.m + 2 * abs(v0 - v1)
    report = {
        "beta": beta,
        "bound": bound,
        "holds": beta >= bound,
        "balanced": v0 == v1,
        "equality": beta == bound,
    }
    if v0 == v1:
        families_tight = all(b == 2 for name, b in fam_bad.items() if name.startswith("A")) and \
            all(b == 0 for name, b in fam_bad.items() if name.startswith("B"))
        report["families_tight"] = families_tight
        # equality iff every A has 2 bad edges and every B has none
        report["iff_holds"] = (beta == bound) == families_tight
    return report


def _edge_arrays(gadget: GadgetGraph) -> tuple[np.ndarray, np.ndarray]:
    e = np.array(gadget.graph.edges, dtype=np.int64)
    return e[:, 0], e[:, 1]


def badedge_bound_exhaustive(gadget: GadgetGraph) -> dict:
    """Evaluate every distinct cut (the last vertex pinned to side 0).

    Returns the number of cuts checked, bound violations, the minimum bad-edge
    count over balanced cuts and how many balanced cuts reach ``8m``.
    """
    n = gadget.graph.n_vertices
    if n > 32:
        raise InputError("exhaustive check is limited to 32 vertices")
    eu, ev = _edge_arrays(gadget)
    base = 8 * gadget.m
    size = 1 << (n - 1)
    violations = 0
    min_balanced = None
    hits = 0
    for lo in range(0, size, _BLOCK):
        xs = np.arange(lo, min(size, lo + _BLOCK), dtype=np.uint32)
        bad = np.zeros(len(xs), dtype=np.int32)
        for u, v in zip(eu.tolist(), ev.tolist()):
            bad += (((xs >> u) ^ (xs >> v)) & 1) == 0
        ones = np.bitwise_count(xs).astype(np.int32)
        imb = np.abs(n - 2 * ones)
        violations += int(np.count_nonzero(bad < base + 2 * imb))
        bal = bad[imb == 0]
        if len(bal):
            lo_b = int(bal.min())
            min_balanced = lo_b if min_balanced is None else min(min_balanced, lo_b)
            hits += int(np.count_nonzero(bal == base))
    return {"cuts": size, "violations": violations, "min_balanced_beta": min_balanced,
            "balanced_hits_8m": hits, "eight_m": base}


def badedge_bound_sampled(gadget: GadgetGraph, samples: int, rng: np.random.Generator) -> dict:
    n = gadget.graph.n_vertices
    eu, ev = _edge_arrays(gadget)
    base = 8 * gadget.m
    violations = 0
    done = 0
    while done < samples:
        cnt = min(_BLOCK // 8, samples - done)
        sides = rng.integers(0, 2, size=(cnt, n), dtype=np.int8)
        bad = (sides[:, eu] == sides[:, ev]).sum(axis=1)
        imb = np.abs(n - 2 * sides.sum(axis=1, dtype=np.int64))
        violations += int(np.count_nonzero(bad < base + 2 * imb))
        done += cnt
    return {"samples": samples, "violations": violations}


def even_code_cnf() -> Cnf:
    """3 variables, 4 clauses with sign vectors 000, 011, 101, 110; not nae-satisfiable."""
    return Cnf.from_sign_vectors(3, (0, 1, 2), [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)])
