"""Weighted 2-CSP over three variables and its exact-target solver.

An instance fixes per-variable domains, vertex weight tables ``w_i`` and
pair weight tables ``w_ij`` (``i < j``), plus two targets.  An assignment
``(a1, a2, a3)`` satisfies it when the vertex weights sum to exactly ``k_v``
and the pair weights to exactly ``k_e``.

The solver splits both targets over the values the tables actually attain,
filters each split into a tripartite graph, and looks for a triangle with a
boolean matrix product.
"""
from __future__ import annotations

import heapq
import itertools
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from .config import DEFAULT_CAPS
from .errors import InputError, WeightBoundError
from .matmul import Kernel, OpCounter, matmul

PAIRS = ((0, 1), (1, 2), (0, 2))


@dataclass(frozen=True, eq=False)
class Csp2Instance:
    domains: tuple[tuple[Any, ...], ...]
    vertex_weights: tuple[np.ndarray, ...]
    pair_weights: Mapping[tuple[int, int], np.ndarray]
    k_v: int = 0
    k_e: int = 0
    w_max: int = DEFAULT_CAPS.w_max

    def __post_init__(self):
        n = len(self.domains)
        vw = tuple(np.asarray(w, dtype=np.int64).reshape(-1) for w in self.vertex_weights)
        if len(vw) != n:
            raise InputError(f"{len(vw)} vertex tables for {n} variables")
        pw = {}
        for i, j in itertools.combinations(range(n), 2):
            if (i, j) in self.pair_weights:
                pw[(i, j)] = np.asarray(self.pair_weights[(i, j)], dtype=np.int64)
            else:
                pw[(i, j)] = np.zeros((len(self.domains[i]), len(self.domains[j])), dtype=np.int64)
        extra = set(self.pair_weights) - set(pw)
        if extra:
            raise InputError(f"pair tables must be keyed by (i, j) with i < j, got {sorted(extra)}")
        for i, w in enumerate(vw):
            if w.shape != (len(self.domains[i]),):
                raise InputError(f"vertex table {i} has shape {w.shape}, domain size {len(self.domains[i])}")
        for (i, j), w in pw.items():
            if w.shape != (len(self.domains[i]), len(self.domains[j])):
                raise InputError(f"pair table {(i, j)} has shape {w.shape}")
        for w in list(vw) + list(pw.values()):
            if w.size and (w.min() < 0 or w.max() > self.w_max):
                raise WeightBoundError(f"weights must lie in [0, {self.w_max}]")
        if not (0 <= self.k_v <= self.w_max and 0 <= self.k_e <= self.w_max):
            raise WeightBoundError(f"targets must lie in [0, {self.w_max}]")
        for w in list(vw) + list(pw.values()):
            w.setflags(write=False)
        object.__setattr__(self, "vertex_weights", vw)
        object.__setattr__(self, "pair_weights", pw)
        object.__setattr__(self, "domains", tuple(tuple(d) for d in self.domains))

    @property
    def n_vars(self) -> int:
        return len(self.domains)

    def domain_sizes(self) -> tuple[int, ...]:
        return tuple(len(d) for d in self.domains)

    def with_targets(self, k_v: int, k_e: int) -> "Csp2Instance":
        return replace(self, k_v=int(k_v), k_e=int(k_e))

    def evaluate(self, assignment: Sequence[int]) -> tuple[int, int]:
        """``(vertex sum, pair sum)`` of an assignment given as domain indices."""
        vs = sum(int(self.vertex_weights[i][a]) for i, a in enumerate(assignment))
        es = sum(int(w[assignment[i], assignment[j]]) for (i, j), w in self.pair_weights.items())
        return vs, es

    def satisfied_by(self, assignment: Sequence[int]) -> bool:
        return self.evaluate(assignment) == (self.k_v, self.k_e)

    def labels(self, assignment: Sequence[int]) -> tuple[Any, ...]:
        return tuple(self.domains[i][a] for i, a in enumerate(assignment))

    def to_json(self) -> dict:
        return {
            "domains": [list(range(len(d))) for d in self.domains],
            "vertex_weights": [w.tolist() for w in self.vertex_weights],
            "pair_weights": {f"{i},{j}": w.tolist() for (i, j), w in self.pair_weights.items()},
            "K_v": self.k_v,
            "K_e": self.k_e,
        }

    @classmethod
    def from_json(cls, obj: Mapping, w_max: int = DEFAULT_CAPS.w_max) -> "Csp2Instance":
        domains = obj["domains"]
        if not isinstance(domains, list) or not all(isinstance(d, list) for d in domains):
            raise InputError("'domains' must be a list of lists")
        pairs = {}
        for key, table in obj.get("pair_weights", {}).items():
            try:
                i, j = (int(x) for x in str(key).split(","))
            except ValueError:
                raise InputError(f"pair key {key!r} must look like 'i,j'") from None
            if i > j:
                i, j, table = j, i, np.asarray(table).T
            pairs[(i, j)] = table
        return cls(tuple(tuple(d) for d in domains), tuple(obj["vertex_weights"]), pairs,
                   int(obj.get("K_v", 0)), int(obj.get("K_e", 0)), w_max)


@dataclass
class SearchStats:
    """What the exact-target solver looked at; only filled when passed in."""

    queries: int = 0
    vertex_splits: list[tuple[int, int, int]] = field(default_factory=list)
    edge_splits: int = 0
    keep_splits: bool = False


# ---------------------------------------------------------------------------
# triangle detection


def triangle_detect(a12, a23, a13, kernel: Kernel | str = Kernel.BITPACKED,
                    counter: OpCounter | None = None,
                    crossover: int = DEFAULT_CAPS.strassen_crossover) -> tuple[int, int, int] | None:
    """Find ``(u, v, w)`` with ``a12[u, v] & a23[v, w] & a13[u, w]``.

    The boolean product ``a12 @ a23`` masked by ``a13`` marks every closable
    pair; the middle vertex of the first marked pair is recovered by a scan.
    """
    a12 = np.asarray(a12, dtype=bool)
    a23 = np.asarray(a23, dtype=bool)
    a13 = np.asarray(a13, dtype=bool)
    if a12.shape[1] != a23.shape[0] or a13.shape != (a12.shape[0], a23.shape[1]):
        raise InputError(f"inconsistent shapes {a12.shape}, {a23.shape}, {a13.shape}")
    if not (a12.any() and a23.any() and a13.any()):
        return None
    prod = matmul(a12, a23, kernel, counter, crossover) > 0
    hits = np.argwhere(prod & a13)
    if not len(hits):
        return None
    u, w = (int(x) for x in hits[0])
    v = int(np.flatnonzero(a12[u] & a23[:, w])[0])
    return u, v, w


def triangle_detect_naive(a12, a23, a13) -> tuple[int, int, int] | None:
    """Triple-loop oracle with the same (u, w, v) search order as :func:`triangle_detect`."""
    a12 = np.asarray(a12, dtype=bool)
    a23 = np.asarray(a23, dtype=bool)
    a13 = np.asarray(a13, dtype=bool)
    for u in range(a12.shape[0]):
        for w in range(a23.shape[1]):
            if not a13[u, w]:
                continue
            for v in range(a12.shape[1]):
                if a12[u, v] and a23[v, w]:
                    return u, v, w
    return None


# ---------------------------------------------------------------------------
# exact-target solving


def _buckets(values: np.ndarray) -> dict[int, np.ndarray]:
    order = np.argsort(values, kind="stable")
    vals = values[order]
    out = {}
    for v in np.unique(vals):
        out[int(v)] = order[vals == v]
    return out


def solve_exact_target(instance: Csp2Instance, kernel: Kernel | str = Kernel.BITPACKED,
                       counter: OpCounter | None = None, stats: SearchStats | None = None,
                       crossover: int = DEFAULT_CAPS.strassen_crossover,
                       _buckets_cache: list | None = None) -> tuple[int, int, int] | None:
    """Return domain indices ``(a1, a2, a3)`` hitting both targets exactly, or None.

    Splits ``k_v = k1 + k2 + k3`` range over values attained by each vertex
    table, in ascending ``(k1, k2)`` order; for each split the pair target
    is split over the values attained inside the filtered sub-tables, and each
    resulting tripartite graph is handed to :func:`triangle_detect`.
    """
    if instance.n_vars != 3:
        raise InputError(f"the exact-target solver takes 3 variables, got {instance.n_vars}")
    if stats is not None:
        stats.queries += 1
    k_v, k_e = instance.k_v, instance.k_e
    b1, b2, b3 = _buckets_cache or [_buckets(w) for w in instance.vertex_weights]
    w12 = instance.pair_weights[(0, 1)]
    w23 = instance.pair_weights[(1, 2)]
    w13 = instance.pair_weights[(0, 2)]
    for k1, p1 in b1.items():
        if k1 > k_v:
            break
        for k2, p2 in b2.items():
            k3 = k_v - k1 - k2
            if k3 < 0:
                break
            p3 = b3.get(k3)
            if p3 is None:
                continue
            if stats is not None and stats.keep_splits:
                stats.vertex_splits.append((k1, k2, k3))
            s12 = w12[np.ix_(p1, p2)]
            s23 = w23[np.ix_(p2, p3)]
            s13 = w13[np.ix_(p1, p3)]
            e13_vals = set(np.unique(s13).tolist())
            e23_vals = np.unique(s23)
            for e12 in np.unique(s12).tolist():
                if e12 > k_e:
                    break
                for e23 in e23_vals.tolist():
                    e13 = k_e - e12 - e23
                    if e13 < 0:
                        break
                    if e13 not in e13_vals:
                        continue
                    if stats is not None:
                        stats.edge_splits += 1
                    tri = triangle_detect(s12 == e12, s23 == e23, s13 == e13, kernel, counter, crossover)
                    if tri is not None:
                        u, v, w = tri
                        return int(p1[u]), int(p2[v]), int(p3[w])
    return None


def solve_exact_target_naive(instance: Csp2Instance) -> tuple[int, int, int] | None:
    """Triple loop over D1 x D2 x D3; first satisfying assignment in index order."""
    if instance.n_vars != 3:
        raise InputError(f"the exact-target solver takes 3 variables, got {instance.n_vars}")
    w1, w2, w3 = instance.vertex_weights
    w12 = instance.pair_weights[(0, 1)]
    w23 = instance.pair_weights[(1, 2)]
    w13 = instance.pair_weights[(0, 2)]
    for a in range(len(w1)):
        for b in range(len(w2)):
            for c in range(len(w3)):
                if (int(w1[a]) + int(w2[b]) + int(w3[c]) == instance.k_v
                        and int(w12[a, b]) + int(w23[b, c]) + int(w13[a, c]) == instance.k_e):
                    return a, b, c
    return None


# ---------------------------------------------------------------------------
# achievable targets


def _sumset(*value_sets: np.ndarray) -> np.ndarray:
    acc = np.zeros(1, dtype=np.int64)
    for vals in value_sets:
        acc = np.unique(np.add.outer(acc, np.unique(vals)).ravel())
    return acc


def achievable_vertex_sums(instance: Csp2Instance) -> np.ndarray:
    """Every attainable vertex total (exact: vertex tables are independent)."""
    return _sumset(*instance.vertex_weights)


def candidate_pair_sums(instance: Csp2Instance) -> np.ndarray:
    """Sums of one attained value per pair table; a superset of attainable pair totals."""
    return _sumset(*(instance.pair_weights[p] for p in PAIRS))


def candidate_targets(vertex_sums: np.ndarray, pair_sums: np.ndarray,
                      descending: bool = False) -> Iterator[tuple[int, int]]:
    """Lazily yield ``(k_v, k_e)`` ordered by ``k_v + k_e`` (ties by ``k_v``)."""
    vs = np.sort(vertex_sums)
    es = np.sort(pair_sums)
    if descending:
        vs, es = vs[::-1], es[::-1]
    if not len(vs) or not len(es):
        return
    sign = -1 if descending else 1
    heap = [(sign * int(vs[i] + es[0]), sign * int(vs[i]), i, 0) for i in range(len(vs))]
    heapq.heapify(heap)
    while heap:
        _, _, i, j = heapq.heappop(heap)
        yield int(vs[i]), int(es[j])
        if j + 1 < len(es):
            heapq.heappush(heap, (sign * int(vs[i] + es[j + 1]), sign * int(vs[i]), i, j + 1))


def dense_targets(limit: int) -> Iterator[tuple[int, int]]:
    """Every ``(k_v, k_e)`` with ``k_v + k_e <= limit`` by ascending total."""
    for total in range(limit + 1):
        for k_v in range(total + 1):
            yield k_v, total - k_v


# ---------------------------------------------------------------------------
# grouping and the union-domain construction


def group_sizes(n: int) -> tuple[int, int, int]:
    return tuple(n // 3 + (1 if r < n % 3 else 0) for r in range(3))  # type: ignore[return-value]


def group_into_three(n_vars: int, domain: Sequence[Any], vertex_weights=None, pair_weights=None,
                     k_v: int = 0, k_e: int = 0, allowed: Sequence[Sequence[int]] | None = None,
                     w_max: int = DEFAULT_CAPS.w_max) -> Csp2Instance:
    """Merge ``n_vars`` variables over ``domain`` into three super-variables.

    Groups are contiguous with sizes ``ceil(n/3)`` or ``floor(n/3)``.  A
    super-value is a tuple of domain indices; its vertex weight collects the
    group's vertex weights and internal pair weights, and the pair weight of
    two super-values collects every cross-group pair weight, so the total
    weight of any full assignment is unchanged.  ``allowed`` optionally
    restricts individual variables to a subset of domain indices.
    """
    if n_vars < 1:
        raise InputError("need at least one variable")
    dsize = len(domain)
    vw = [np.zeros(dsize, dtype=np.int64) if vertex_weights is None
          else np.asarray(vertex_weights[i], dtype=np.int64) for i in range(n_vars)]
    pw = {}
    for (i, j), table in (pair_weights or {}).items():
        t = np.asarray(table, dtype=np.int64)
        pw[(i, j) if i < j else (j, i)] = t if i < j else t.T
    allowed = allowed or [range(dsize)] * n_vars
    sizes = group_sizes(n_vars)
    starts = [0, sizes[0], sizes[0] + sizes[1]]
    members = [list(range(starts[g], starts[g] + sizes[g])) for g in range(3)]
    idx = []
    for g in range(3):
        combos = list(itertools.product(*(list(allowed[v]) for v in members[g])))
        idx.append(np.array(combos, dtype=np.int64).reshape(len(combos), sizes[g]))
    vtables = []
    for g in range(3):
        tab = np.zeros(len(idx[g]), dtype=np.int64)
        for li, v in enumerate(members[g]):
            tab += vw[v][idx[g][:, li]]
        for (li, v), (lj, u) in itertools.combinations(enumerate(members[g]), 2):
            if (v, u) in pw:
                tab += pw[(v, u)][idx[g][:, li], idx[g][:, lj]]
        vtables.append(tab)
    ptables = {}
    for g, h in PAIRS:
        tab = np.zeros((len(idx[g]), len(idx[h])), dtype=np.int64)
        for li, v in enumerate(members[g]):
            for lj, u in enumerate(members[h]):
                if (v, u) in pw:
                    tab += pw[(v, u)][np.ix_(idx[g][:, li], idx[h][:, lj])]
        ptables[(g, h)] = tab
    domains = tuple(tuple(tuple(int(x) for x in row) for row in idx[g]) for g in range(3))
    return Csp2Instance(domains, tuple(vtables), ptables, k_v, k_e, w_max)


def to_union_domain(instance: Csp2Instance) -> Csp2Instance:
    """Rebuild with one shared domain ``D1 u D2 u D3``.

    Values outside a variable's own part get vertex weight ``k_v + 1`` and
    pair weight ``k_e + 1``; since weights are nonnegative, no assignment
    using them can meet the targets.
    """
    if instance.n_vars != 3:
        raise InputError("union-domain form is defined for 3 variables")
    union = tuple((i, x) for i, d in enumerate(instance.domains) for x in d)
    offs = np.cumsum([0] + list(instance.domain_sizes()))
    total = len(union)
    vw = []
    for i in range(3):
        tab = np.full(total, instance.k_v + 1, dtype=np.int64)
        tab[offs[i]:offs[i + 1]] = instance.vertex_weights[i]
        vw.append(tab)
    pw = {}
    for i, j in PAIRS:
        tab = np.full((total, total), instance.k_e + 1, dtype=np.int64)
        tab[offs[i]:offs[i + 1], offs[j]:offs[j + 1]] = instance.pair_weights[(i, j)]
        pw[(i, j)] = tab
    return Csp2Instance((union,) * 3, tuple(vw), pw, instance.k_v, instance.k_e, instance.w_max)


def union_assignment_to_parts(instance: Csp2Instance, assignment: Sequence[int]) -> tuple[int, int, int]:
    offs = np.cumsum([0] + list(instance.domain_sizes()))
    return tuple(int(a - offs[i]) for i, a in enumerate(assignment))  # type: ignore[return-value]
