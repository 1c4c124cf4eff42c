"""Exhaustive reference solvers.

These are the ground truth for every fast path and every reduction claim, so
they stay deliberately simple: enumerate the whole space, evaluate the
objective exactly, break ties towards the lexicographically smallest witness.
Enumeration is vectorised with numpy over blocks of candidates.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .config import DEFAULT_CAPS, Caps
from .core import (Clustering, Cnf, Graph, PointSet, SymbolicSum, WeightedGraph,
                   minsum_cost)
from .errors import CapError, InputError

_BLOCK = 1 << 18
_INT64_SAFE = 2**62


class Verdict(str, enum.Enum):
    YES = "YES"
    NO = "NO"
    NEITHER = "NEITHER"


@dataclass
class SolveReport:
    optimum: Any
    witness: tuple[int, ...]
    explored: int
    counters: dict[str, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        opt = self.optimum
        if isinstance(opt, SymbolicSum):
            body = {"optimum_num": None, "optimum_den": None, "optimum_symbolic": opt.to_json()}
            if opt.is_rational:
                q = opt.as_fraction()
                body.update(optimum_num=str(q.numerator), optimum_den=str(q.denominator))
        else:
            q = Fraction(opt)
            body = {"optimum_num": str(q.numerator), "optimum_den": str(q.denominator)}
        body["witness"] = list(self.witness)
        body["explored"] = self.explored
        if self.counters:
            body["counters"] = dict(sorted(self.counters.items()))
        return body


def _k_partitions(n: int, k: int) -> np.ndarray:
    """All restricted-growth strings of length n using exactly k labels, in lex order."""
    out: list[tuple[int, ...]] = []
    buf = [0] * n

    def rec(i: int, used: int) -> None:
        if n - i < k - used:
            return
        if i == n:
            if used == k:
                out.append(tuple(buf))
            return
        for c in range(min(used + 1, k)):
            buf[i] = c
            rec(i + 1, max(used, c + 1))

    if n >= 1:
        buf[0] = 0
        rec(1, 1)
    return np.array(out, dtype=np.int64).reshape(len(out), n)


def _two_partitions(n: int, nonempty: bool = True) -> np.ndarray:
    """Rows (0, s_1, ..., s_{n-1}) in lex order; the all-zero row is dropped when nonempty."""
    start = 1 if nonempty else 0
    x = np.arange(start, 1 << (n - 1), dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((x[:, None] >> shifts[None, :]) & 1).astype(np.int64)


def _cap_for(k: int, caps: Caps) -> int:
    if k <= 2:
        return caps.oracle_n_k2
    if k == 3:
        return caps.oracle_n_k3
    return caps.oracle_n_other


def _enumerate(points: PointSet, k: int, caps: Caps) -> np.ndarray:
    if k < 1 or k > points.n:
        raise InputError(f"need 1 <= k <= n, got k={k}, n={points.n}")
    cap = _cap_for(k, caps)
    if points.n > cap:
        raise CapError(f"brute force with k={k} is capped at n={cap}, got n={points.n}")
    if k == 2:
        return _two_partitions(points.n)
    return _k_partitions(points.n, k)


def _within_sums(assign: np.ndarray, dist: np.ndarray, k: int):
    """Per-row, per-cluster (unordered pair distance sum, cluster size)."""
    sums, sizes = [], []
    for j in range(k):
        x = (assign == j).astype(dist.dtype)
        sums.append(((x @ dist) * x).sum(axis=1) // 2)
        sizes.append((assign == j).sum(axis=1))
    return sums, sizes


def brute_kmeans(points: PointSet, k: int, caps: Caps = DEFAULT_CAPS) -> SolveReport:
    """Exact k-means optimum over every partition into k nonempty clusters."""
    assign = _enumerate(points, k, caps)
    dist = points.sq_dist_matrix()
    lcm = math.lcm(*range(1, points.n + 1))
    bound = math.comb(points.n, 2) * 4 * points.max_abs**2 * points.d * lcm * k
    if bound >= _INT64_SAFE or dist.dtype == object:
        dist = dist.astype(object)
    best_num = None
    best_row = None
    for lo in range(0, len(assign), _BLOCK):
        block = assign[lo:lo + _BLOCK]
        sums, sizes = _within_sums(block, dist, k)
        num = sum(s * (lcm // z) for s, z in zip(sums, sizes))
        i = int(np.argmin(num))
        if best_num is None or num[i] < best_num:
            best_num, best_row = int(num[i]), block[i]
    return SolveReport(Fraction(best_num, lcm), tuple(int(x) for x in best_row), len(assign))


def brute_minsum(points: PointSet, k: int, p: int = 1, caps: Caps = DEFAULT_CAPS) -> SolveReport:
    """Exact k-min-sum optimum in the l_p metric."""
    if p < 1:
        raise InputError("metric exponent p must be >= 1")
    assign = _enumerate(points, k, caps)
    rad = points.lp_radicands(p)
    if p == 1:
        dist = rad.astype(np.int64) if int(rad.max()) * points.n**2 < _INT64_SAFE else rad
        best_val, best_row = None, None
        for lo in range(0, len(assign), _BLOCK):
            block = assign[lo:lo + _BLOCK]
            sums, _ = _within_sums(block, dist, k)
            total = sum(sums)
            i = int(np.argmin(total))
            if best_val is None or total[i] < best_val:
                best_val, best_row = int(total[i]), block[i]
        return SolveReport(SymbolicSum.constant(best_val, 1), tuple(int(x) for x in best_row),
                           len(assign))
    fdist = rad.astype(float) ** (1.0 / p)
    totals = np.concatenate([
        sum(((block == j).astype(float) @ fdist * (block == j)).sum(axis=1) / 2 for j in range(k))
        for block in (assign[lo:lo + _BLOCK] for lo in range(0, len(assign), _BLOCK))
    ])
    lowest = float(totals.min())
    # generous float filter; the exact comparison below decides
    near = np.flatnonzero(totals <= lowest + 1e-7 * max(1.0, abs(lowest)))
    best_val, best_row = None, None
    for i in near:
        val = minsum_cost(points, Clustering(assign[i], k), p)
        if best_val is None or val < best_val:
            best_val, best_row = val, assign[i]
    return SolveReport(best_val, tuple(int(x) for x in best_row), len(assign))


def _maxcut_values(graph: WeightedGraph, xs: np.ndarray, n: int) -> np.ndarray:
    big = graph.total_weight >= _INT64_SAFE
    total = np.zeros(len(xs), dtype=object if big else np.int64)
    for u, v, w in graph.edges:
        cut = ((xs >> (n - 1 - u)) ^ (xs >> (n - 1 - v))) & 1
        total = total + (cut.astype(object) * w if big else cut * w)
    return total


def brute_maxcut(graph: WeightedGraph, caps: Caps = DEFAULT_CAPS) -> SolveReport:
    """Maximum cut weight over the 2^(n-1) partitions with vertex 0 on side 0."""
    n = graph.n_vertices
    if n == 0:
        return SolveReport(0, (), 1)
    if n > caps.maxcut_oracle_n:
        raise CapError(f"brute-force max-cut is capped at n={caps.maxcut_oracle_n}, got {n}")
    size = 1 << (n - 1)
    best, best_x = None, 0
    for lo in range(0, size, _BLOCK):
        xs = np.arange(lo, min(size, lo + _BLOCK), dtype=np.int64)
        vals = _maxcut_values(graph, xs, n)
        i = int(np.argmax(vals))
        if best is None or vals[i] > best:
            best, best_x = int(vals[i]), int(xs[i])
    witness = tuple((best_x >> (n - 1 - v)) & 1 for v in range(n))
    return SolveReport(best, witness, size)


def _bad_edge_counts(graph: Graph, xs: np.ndarray, n: int) -> np.ndarray:
    bad = np.zeros(len(xs), dtype=np.int64)
    for u, v in graph.edges:
        bad += 1 - (((xs >> u) ^ (xs >> v)) & 1)
    return bad


def brute_balanced_maxcut(graph: Graph, t: int, caps: Caps = DEFAULT_CAPS) -> Verdict:
    """Decide the Balanced Max-Cut promise problem by full enumeration.

    YES: some balanced partition has exactly ``t`` bad edges.  NO: every
    partition has more than ``t + (t/n) * ||V0| - |V1||`` bad edges.
    NEITHER when the input falls in the promise gap.
    """
    n = graph.n_vertices
    if n > caps.maxcut_oracle_n:
        raise CapError(f"balanced max-cut enumeration is capped at n={caps.maxcut_oracle_n}")
    if n == 0:
        return Verdict.YES if t == 0 else Verdict.NO
    yes = False
    no = True
    size = 1 << (n - 1)  # complement symmetry: vertex n-1 stays on side 0
    for lo in range(0, size, _BLOCK):
        xs = np.arange(lo, min(size, lo + _BLOCK), dtype=np.int64)
        bad = _bad_edge_counts(graph, xs, n)
        ones = np.bitwise_count(xs.astype(np.uint64)).astype(np.int64)
        imbalance = np.abs(n - 2 * ones)
        if n % 2 == 0 and np.any((imbalance == 0) & (bad == t)):
            yes = True
        # bad > t + t*imb/n, kept in integers
        if np.any(n * bad <= n * t + t * imbalance):
            no = False
    if yes:
        return Verdict.YES
    return Verdict.NO if no else Verdict.NEITHER


def brute_coloring(graph: Graph, k: int) -> tuple[Verdict, tuple[int, ...] | None]:
    """Backtracking proper k-colouring search; vertex 0 is pinned to colour 0."""
    n = graph.n_vertices
    if n == 0:
        return Verdict.YES, ()
    if k < 1:
        return Verdict.NO, None
    nbrs = [[v for v in range(n) if graph.has_edge(u, v)] for u in range(n)]
    colour = [-1] * n

    def place(i: int, used: int) -> bool:
        if i == n:
            return True
        # a fresh colour is interchangeable with any other fresh colour
        for c in range(min(used + 1, k)):
            if all(colour[w] != c for w in nbrs[i]):
                colour[i] = c
                if place(i + 1, max(used, c + 1)):
                    return True
                colour[i] = -1
        return False

    if place(0, 0):
        return Verdict.YES, tuple(colour)
    return Verdict.NO, None


def brute_nae_sat(cnf: Cnf, max_vars: int = 24) -> tuple[Verdict, tuple[int, ...] | None]:
    """Try all 2^n assignments; literal (i, a) evaluates to ``x_i XOR a``."""
    n = cnf.n_vars
    if n > max_vars:
        raise CapError(f"NAE-SAT enumeration is capped at {max_vars} variables")
    if not cnf.clauses:
        return Verdict.YES, tuple([0] * n)
    size = 1 << n
    for lo in range(0, size, _BLOCK):
        xs = np.arange(lo, min(size, lo + _BLOCK), dtype=np.int64)
        ok = np.ones(len(xs), dtype=bool)
        for c in cnf.clauses:
            vals = [((xs >> (n - 1 - v)) & 1) ^ a for v, a in c]
            s = sum(vals)
            ok &= (s > 0) & (s < len(c))
        hits = np.flatnonzero(ok)
        if len(hits):
            x = int(xs[hits[0]])
            return Verdict.YES, tuple((x >> (n - 1 - v)) & 1 for v in range(n))
    return Verdict.NO, None
