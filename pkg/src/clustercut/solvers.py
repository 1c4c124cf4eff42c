"""Exact solvers that beat exhaustive search asymptotically.

2-means is compiled, per size signature, into a three-variable weighted
2-CSP whose satisfying assignments are exactly the clusterings with that
signature, so that for weights

    w_i  = |B| * pairsum(A_i)      + |A| * pairsum(B_i)
    w_ij = |B| * cross(A_i, A_j)   + |A| * cross(B_i, B_j)

the cost of the assembled clustering is ``(k_v + k_e) / (|A| |B|)``.  Within
one signature the denominator is fixed, so the first satisfiable target in
ascending order of ``k_v + k_e`` is that signature's optimum; across
signatures a candidate is skipped only when its ratio is strictly worse than
a fixed heuristic upper bound, which makes both the result and the work
counters independent of processing order.

Max-Cut groups the vertices into three super-variables and scans achievable
cut totals from the top.  2-min-sum goes through Max-Cut on the complete
graph of pairwise distances.
"""
from __future__ import annotations

import itertools
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .core import Clustering, PointSet, SymbolicSum, WeightedGraph, kmeans_cost, minsum_cost
from .csp import (Csp2Instance, SearchStats, _buckets, achievable_vertex_sums,
                  candidate_pair_sums, candidate_targets, dense_targets, group_into_three,
                  group_sizes, solve_exact_target, to_union_domain, union_assignment_to_parts)
from .errors import CapError, InputError, WeightBoundError
from .matmul import Kernel, OpCounter
from .oracles import SolveReport
from .reductions import minsum_to_maxcut


@dataclass(frozen=True)
class SplitSpec:
    """Groups ``P_1, P_2, P_3`` (point indices) and per-group A-side sizes."""

    groups: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    a: tuple[int, int, int]

    def __post_init__(self):
        for g, ai in zip(self.groups, self.a):
            if not 0 <= ai <= len(g):
                raise InputError(f"a-size {ai} outside [0, {len(g)}]")
        n = sum(len(g) for g in self.groups)
        if not 1 <= sum(self.a) <= n - 1:
            raise InputError("both clusters must be nonempty")

    @property
    def b(self) -> tuple[int, int, int]:
        return tuple(len(g) - ai for g, ai in zip(self.groups, self.a))  # type: ignore[return-value]

    @property
    def size_a(self) -> int:
        return sum(self.a)

    @property
    def size_b(self) -> int:
        return sum(self.b)

    def domain_sizes(self) -> tuple[int, int, int]:
        return tuple(math.comb(len(g), ai) for g, ai in zip(self.groups, self.a))  # type: ignore[return-value]


@dataclass
class CandidateSolution:
    k_v: int
    k_e: int
    split: SplitSpec
    witness: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]  # per group (A, B)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.k_v + self.k_e, self.split.size_a * self.split.size_b)

    def clustering(self, n: int) -> Clustering:
        assign = [0] * n
        for _, b_side in self.witness:
            for x in b_side:
                assign[x] = 1
        return Clustering(assign, 2)


def contiguous_groups(n: int) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    sizes = group_sizes(n)
    out, start = [], 0
    for s in sizes:
        out.append(tuple(range(start, start + s)))
        start += s
    return tuple(out)  # type: ignore[return-value]


def weight_bound(points: PointSet) -> int:
    """Upper bound ``8 M^2 n^3 d`` on any ``k_v + k_e``."""
    return 8 * points.max_abs**2 * points.n**3 * points.d


def _check_weight_guard(points: PointSet, caps: Caps) -> None:
    if weight_bound(points) > caps.w_max:
        raise WeightBoundError(
            f"weight bound 8*M^2*n^3*d = {weight_bound(points)} exceeds w_max = {caps.w_max}")


def build_csp_for_split(points: PointSet, split: SplitSpec, targets: tuple[int, int] = (0, 0),
                        caps: Caps = DEFAULT_CAPS, dist: np.ndarray | None = None) -> Csp2Instance:
    """Three-variable instance whose domain ``D_i`` lists every ``(A_i, B_i)`` of ``P_i`` with ``|A_i| = a_i``."""
    _check_weight_guard(points, caps)
    if sum(len(g) for g in split.groups) != points.n:
        raise InputError("split groups must cover every point")
    dist = points.sq_dist_matrix() if dist is None else dist
    sa, sb = split.size_a, split.size_b
    doms, xs = [], []
    for g, ai in zip(split.groups, split.a):
        combos = list(itertools.combinations(range(len(g)), ai))
        dom = []
        x = np.zeros((len(combos), len(g)), dtype=np.int64)
        for r, c in enumerate(combos):
            x[r, list(c)] = 1
            cs = set(c)
            dom.append((tuple(g[t] for t in c), tuple(g[t] for t in range(len(g)) if t not in cs)))
        doms.append(tuple(dom))
        xs.append(x)
    vw = []
    for i, g in enumerate(split.groups):
        sub = dist[np.ix_(g, g)]
        x, y = xs[i], 1 - xs[i]
        pa = ((x @ sub) * x).sum(axis=1) // 2
        pb = ((y @ sub) * y).sum(axis=1) // 2
        vw.append(sb * pa + sa * pb)
    pw = {}
    for i, j in ((0, 1), (1, 2), (0, 2)):
        sub = dist[np.ix_(split.groups[i], split.groups[j])]
        xi, xj = xs[i], xs[j]
        cross_a = xi @ sub @ xj.T
        cross_b = (1 - xi) @ sub @ (1 - xj).T
        pw[(i, j)] = sb * cross_a + sa * cross_b
    return Csp2Instance(tuple(doms), tuple(vw), pw, targets[0], targets[1], caps.w_max)


@dataclass
class _Search:
    best: CandidateSolution | None = None
    best_key: tuple | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)

    def offer(self, cand: CandidateSolution, key: tuple) -> None:
        with self.lock:
            if self.best_key is None or key < self.best_key:
                self.best, self.best_key = cand, key


def _signatures(groups) -> list[tuple[int, int, int]]:
    sizes = [len(g) for g in groups]
    n = sum(sizes)
    sigs = []
    for a in itertools.product(*(range(s + 1) for s in sizes)):
        if not 1 <= sum(a) <= n - 1:
            continue
        mirror = tuple(s - x for s, x in zip(sizes, a))
        # (A, B) under a is (B, A) under its mirror; keep one representative
        if a > mirror:
            continue
        sigs.append(a)
    sigs.sort(key=lambda a: (math.prod(math.comb(s, x) for s, x in zip(sizes, a)), a))
    return sigs


def heuristic_upper_bound(points: PointSet) -> tuple[Fraction, tuple[int, ...]]:
    """Best threshold split along any coordinate axis; a cheap, deterministic upper bound."""
    n = points.n
    dist = points.sq_dist_matrix()
    best: tuple[Fraction, tuple[int, ...]] | None = None
    for axis in range(points.d):
        order = np.argsort(points.coords[:, axis], kind="stable")
        for cut in range(1, n):
            assign = [0] * n
            for i in order[cut:]:
                assign[int(i)] = 1
            a = [i for i in range(n) if assign[i] == 0]
            b = [i for i in range(n) if assign[i] == 1]
            cost = Fraction(int(dist[np.ix_(a, a)].sum()) // 2, len(a)) + \
                Fraction(int(dist[np.ix_(b, b)].sum()) // 2, len(b))
            key = (cost, Clustering(assign, 2).canonical().assignment)
            if best is None or key < best:
                best = key
    assert best is not None
    return best


def solve_2means_exact(points: PointSet, kernel: Kernel | str = Kernel.BITPACKED,
                       caps: Caps = DEFAULT_CAPS, counter: OpCounter | None = None,
                       threads: int = 1, debug: bool = False, targets: str = "achievable",
                       union_domain: bool = False, stats: dict | None = None) -> SolveReport:
    """Exact 2-means optimum through exact-target weighted 2-CSP queries.

    ``targets="dense"`` scans every integer target pair (tiny inputs only);
    ``union_domain=True`` solves the shared-domain penalty form of each query.
    """
    n = points.n
    if n < 2:
        raise InputError("2-means needs at least two points")
    if n > caps.solver_max_n:
        raise CapError(f"the CSP solver is capped at n={caps.solver_max_n}, got {n}")
    if targets not in ("achievable", "dense"):
        raise InputError(f"unknown target mode {targets!r}")
    _check_weight_guard(points, caps)
    counter = counter if counter is not None else OpCounter()
    dist = points.sq_dist_matrix()
    groups = contiguous_groups(n)
    sigs = _signatures(groups)
    # a fixed bound (rather than the best-so-far) keeps the work counters
    # identical for every thread count and scheduling order
    bound = heuristic_upper_bound(points)[0]
    search = _Search()
    tallies = {"queries": 0, "signatures": len(sigs), "max_domain_sum": 0, "edge_splits": 0}
    tally_lock = threading.Lock()

    def run(order: int, a: tuple[int, int, int]) -> None:
        split = SplitSpec(groups, a)
        inst = build_csp_for_split(points, split, caps=caps, dist=dist)
        denom = split.size_a * split.size_b
        sstats = SearchStats()
        local = OpCounter()
        if targets == "dense":
            limit = int(sum(int(w.max()) for w in inst.vertex_weights)
                        + sum(int(w.max()) for w in inst.pair_weights.values()))
            stream = dense_targets(limit)
        else:
            stream = candidate_targets(achievable_vertex_sums(inst), candidate_pair_sums(inst))
        buckets = [_buckets(w) for w in inst.vertex_weights]
        for k_v, k_e in stream:
            if Fraction(k_v + k_e, denom) > bound:
                break
            query = inst.with_targets(k_v, k_e)
            if union_domain:
                uq = to_union_domain(query)
                hit = solve_exact_target(uq, kernel, local, sstats, caps.strassen_crossover)
                hit = None if hit is None else union_assignment_to_parts(query, hit)
            else:
                hit = solve_exact_target(query, kernel, local, sstats, caps.strassen_crossover,
                                         _buckets_cache=buckets)
            if hit is None:
                continue
            witness = query.labels(hit)
            cand = CandidateSolution(k_v, k_e, split, witness)
            if debug:
                assert query.evaluate(hit) == (k_v, k_e)
                assert kmeans_cost(points, cand.clustering(n)) == cand.ratio, "ratio identity broken"
            clus = cand.clustering(n).canonical().assignment
            search.offer(cand, (cand.ratio, order, clus))
            break
        with tally_lock:
            tallies["queries"] += sstats.queries
            tallies["edge_splits"] += sstats.edge_splits
            tallies["max_domain_sum"] = max(tallies["max_domain_sum"], sum(inst.domain_sizes()))
            counter.mults += local.mults
            counter.word_ops += local.word_ops
            counter.calls += local.calls
            if counter.keep_log:
                counter.log.extend(local.log)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda t: run(*t), enumerate(sigs)))
    else:
        for order, a in enumerate(sigs):
            run(order, a)
    best = search.best
    assert best is not None  # every signature has a satisfiable target
    clustering = best.clustering(n).canonical()
    if stats is not None:
        stats.update(tallies)
    tallies.update(counter.as_dict())
    return SolveReport(best.ratio, clustering.assignment, tallies["queries"], tallies)


def maxcut_csp(graph: WeightedGraph, caps: Caps = DEFAULT_CAPS) -> Csp2Instance:
    """Max-Cut as a grouped 2-CSP over {0, 1}; vertex 0 is pinned to side 0."""
    n = graph.n_vertices
    if graph.total_weight > caps.w_max:
        raise WeightBoundError(f"total weight {graph.total_weight} exceeds w_max = {caps.w_max}")
    pw = {}
    for u, v, w in graph.edges:
        pw[(u, v)] = np.array([[0, w], [w, 0]], dtype=np.int64)
    allowed = [[0]] + [[0, 1]] * (n - 1)
    return group_into_three(n, (0, 1), None, pw, allowed=allowed, w_max=caps.w_max)


def solve_maxcut_fast(graph: WeightedGraph, kernel: Kernel | str = Kernel.BITPACKED,
                      caps: Caps = DEFAULT_CAPS, counter: OpCounter | None = None) -> SolveReport:
    """Maximum-weight cut by scanning achievable totals downward with exact-target queries."""
    n = graph.n_vertices
    counter = counter if counter is not None else OpCounter()
    if n == 0:
        return SolveReport(0, (), 0, counter.as_dict())
    if n > caps.solver_max_n:
        raise CapError(f"the grouped Max-Cut solver is capped at n={caps.solver_max_n}, got {n}")
    inst = maxcut_csp(graph, caps)
    sstats = SearchStats()
    buckets = [_buckets(w) for w in inst.vertex_weights]
    for k_v, k_e in candidate_targets(achievable_vertex_sums(inst), candidate_pair_sums(inst),
                                      descending=True):
        hit = solve_exact_target(inst.with_targets(k_v, k_e), kernel, counter, sstats,
                                 caps.strassen_crossover, _buckets_cache=buckets)
        if hit is None:
            continue
        sides = tuple(x for part in inst.labels(hit) for x in part)
        tallies = {"queries": sstats.queries, "edge_splits": sstats.edge_splits,
                   "domain_sizes": list(inst.domain_sizes()), **counter.as_dict()}
        return SolveReport(k_v + k_e, sides, sstats.queries, tallies)
    raise AssertionError("the all-on-one-side cut always satisfies some target")


def solve_2minsum_exact(points: PointSet, p: int = 1, kernel: Kernel | str = Kernel.BITPACKED,
                        caps: Caps = DEFAULT_CAPS, counter: OpCounter | None = None,
                        scale: int = 10**6) -> SolveReport:
    """2-min-sum via Max-Cut on the complete distance graph.

    For ``p = 1`` distances are integers and the result is exact.  For
    ``p >= 2`` the cut is maximised for distances scaled by ``scale`` and
    rounded; the reported optimum is the exact symbolic cost of that cut.
    """
    if points.n < 2:
        raise InputError("2-min-sum needs at least two points")
    graph = minsum_to_maxcut(points, p, scale)
    rep = solve_maxcut_fast(graph, kernel, caps, counter)
    witness = rep.witness
    if all(x == witness[0] for x in witness):
        # the empty cut keeps everything in one cluster; any single point split off is no worse
        witness = (0,) * (points.n - 1) + (1,)
    if p == 1:
        optimum = SymbolicSum.constant(graph.total_weight - rep.optimum, 1)
        assert optimum == minsum_cost(points, Clustering(witness, 2), 1)
    else:
        optimum = minsum_cost(points, Clustering(witness, 2), p)
    counters = dict(rep.counters)
    counters["scaled_total"] = graph.total_weight
    counters["scaled_cut"] = rep.optimum
    return SolveReport(optimum, witness, rep.explored, counters)
