"""Exact-arithmetic domain types and the cost functions everything else agrees on.

Costs are never computed in floating point when a decision depends on them:
squared Euclidean distances of integer points are integers, cluster
normalisation introduces :class:`fractions.Fraction`, and l_p distances for
``p >= 2`` are kept as integer combinations of p-th roots (:class:`SymbolicSum`).
"""
from __future__ import annotations

import decimal
import functools
import itertools
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

from .config import DEFAULT_CAPS
from .errors import InputError, ValidationError

Partition = Sequence[int]
Literal = tuple[int, int]  # (variable index, sign bit); sign 1 means negated

_INT64_SAFE = 2**62


# ---------------------------------------------------------------------------
# points and clusterings


@dataclass(frozen=True, eq=False)
class PointSet:
    """``n`` integer points in ``d`` dimensions."""

    coords: np.ndarray
    max_abs: int = field(init=False)

    def __init__(self, coords, coord_cap: int | None = None):
        cap = DEFAULT_CAPS.coord_max if coord_cap is None else coord_cap
        rows = [list(r) for r in coords]
        if not rows:
            raise InputError("a point set needs at least one point")
        d = len(rows[0])
        if d < 1:
            raise InputError("points need at least one coordinate")
        for i, r in enumerate(rows):
            if len(r) != d:
                raise InputError(f"point {i} has {len(r)} coordinates, expected {d}")
            for c in r:
                if isinstance(c, bool) or not isinstance(c, (int, np.integer)):
                    if isinstance(c, float) and c.is_integer():
                        continue
                    raise InputError(f"point {i} has non-integer coordinate {c!r}")
        flat = [int(c) for r in rows for c in r]
        m = max(abs(c) for c in flat)
        if m > cap:
            raise InputError(f"coordinate magnitude {m} exceeds cap {cap}")
        arr = np.array([[int(c) for c in r] for r in rows], dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)
        object.__setattr__(self, "max_abs", m)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def d(self) -> int:
        return self.coords.shape[1]

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, PointSet) and np.array_equal(self.coords, other.coords)

    def __hash__(self) -> int:
        return hash((self.coords.shape, self.coords.tobytes()))

    def __repr__(self) -> str:
        return f"PointSet(n={self.n}, d={self.d}, M={self.max_abs})"

    def rows(self) -> list[tuple[int, ...]]:
        return [tuple(int(c) for c in r) for r in self.coords]

    def sq_dist_matrix(self) -> np.ndarray:
        """Pairwise squared Euclidean distances, int64 when that cannot overflow."""
        if 4 * self.max_abs**2 * self.d * max(self.n, 2) ** 2 < _INT64_SAFE:
            diff = self.coords[:, None, :] - self.coords[None, :, :]
            return (diff * diff).sum(axis=2)
        rows = self.rows()
        out = np.empty((self.n, self.n), dtype=object)
        for i, x in enumerate(rows):
            for j, y in enumerate(rows):
                out[i, j] = sum((a - b) ** 2 for a, b in zip(x, y))
        return out

    def lp_radicands(self, p: int) -> np.ndarray:
        """``sum_i |x_i - y_i|**p`` for every pair; the p-th root is the l_p distance."""
        rows = self.rows()
        out = np.empty((self.n, self.n), dtype=object)
        for i, x in enumerate(rows):
            for j, y in enumerate(rows):
                out[i, j] = sum(abs(a - b) ** p for a, b in zip(x, y))
        return out


@dataclass(frozen=True)
class Clustering:
    k: int
    assignment: tuple[int, ...]

    def __init__(self, assignment: Iterable[int], k: int | None = None):
        a = tuple(int(x) for x in assignment)
        if k is None:
            k = max(a) + 1 if a else 0
        if any(x < 0 or x >= k for x in a):
            raise InputError(f"cluster indices must lie in [0, {k})")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "assignment", a)

    def __len__(self) -> int:
        return len(self.assignment)

    def clusters(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for i, c in enumerate(self.assignment):
            out[c].append(i)
        return out

    def canonical(self) -> "Clustering":
        """Relabel clusters in order of first appearance."""
        relabel: dict[int, int] = {}
        for c in self.assignment:
            relabel.setdefault(c, len(relabel))
        return Clustering([relabel[c] for c in self.assignment], self.k)


def _check_clustering(points_n: int, clustering: Clustering) -> list[list[int]]:
    if len(clustering) != points_n:
        raise InputError(f"assignment has length {len(clustering)}, expected {points_n}")
    groups = clustering.clusters()
    for j, g in enumerate(groups):
        if not g:
            raise InputError(f"cluster {j} is empty")
    return groups


def _pair_sum(dist, members: Sequence[int]) -> int:
    return sum(int(dist[x, y]) for x, y in itertools.combinations(members, 2))


def kmeans_cost(points: PointSet, clustering: Clustering) -> Fraction:
    """Sum over clusters of within-cluster unordered-pair squared distances over |C|."""
    groups = _check_clustering(points.n, clustering)
    dist = points.sq_dist_matrix()
    return sum((Fraction(_pair_sum(dist, g), len(g)) for g in groups), Fraction(0))


def kmeans_cost_centroid(points: PointSet, clustering: Clustering) -> Fraction:
    """Same cost via explicit centroids; kept independent of :func:`kmeans_cost`."""
    groups = _check_clustering(points.n, clustering)
    rows = points.rows()
    total = Fraction(0)
    for g in groups:
        mu = [Fraction(sum(rows[i][t] for i in g), len(g)) for t in range(points.d)]
        for i in g:
            total += sum((rows[i][t] - mu[t]) ** 2 for t in range(points.d))
    return total


# ---------------------------------------------------------------------------
# sums of p-th roots


@functools.lru_cache(maxsize=65536)
def _split_power(v: int, p: int) -> tuple[int, int]:
    """Write ``v = s**p * r`` with ``r`` free of p-th powers."""
    if v == 0:
        return 0, 1
    if p == 1:
        return v, 1
    s, r, f = 1, v, 2
    while f**p <= r:
        fp = f**p
        while r % fp == 0:
            r //= fp
            s *= f
        f += 1
    return s, r


class SymbolicSum:
    """``sum_r c_r * r**(1/p)`` with rational ``c_r`` and p-th-power-free radicands ``r``.

    Roots of distinct p-th-power-free integers are linearly independent over
    the rationals, so two canonical sums are equal iff their term maps match.
    Ordering falls back to a float comparison, refined with 60-digit decimals
    when the floats agree to within ``REL_TOL``.
    """

    REL_TOL = 1e-9
    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: Mapping[int, Rational] | None = None):
        if p < 1:
            raise InputError("metric exponent p must be >= 1")
        acc: dict[int, Fraction] = {}
        for rad, coef in (terms or {}).items():
            acc[rad] = acc.get(rad, Fraction(0)) + Fraction(coef)
        self.p = p
        self.terms = {r: c for r, c in sorted(acc.items()) if c != 0}

    @classmethod
    def from_radicands(cls, p: int, counts: Mapping[int, Rational]) -> "SymbolicSum":
        """Build ``sum_v counts[v] * v**(1/p)`` from raw (non-canonical) radicands."""
        terms: dict[int, Fraction] = {}
        for v, c in counts.items():
            if v < 0:
                raise InputError("radicands must be nonnegative")
            s, r = _split_power(int(v), p)
            if s:
                terms[r] = terms.get(r, Fraction(0)) + Fraction(c) * s
        return cls(p, terms)

    @classmethod
    def constant(cls, value: Rational, p: int = 1) -> "SymbolicSum":
        return cls(p, {1: value})

    @property
    def is_rational(self) -> bool:
        return all(r == 1 for r in self.terms)

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self!r} is irrational")
        return self.terms.get(1, Fraction(0))

    def __int__(self) -> int:
        q = self.as_fraction()
        if q.denominator != 1:
            raise ValueError(f"{q} is not an integer")
        return q.numerator

    def __float__(self) -> float:
        return sum((float(c) * float(r) ** (1.0 / self.p) for r, c in self.terms.items()), 0.0)

    def to_decimal(self, prec: int = 60) -> decimal.Decimal:
        with decimal.localcontext() as ctx:
            ctx.prec = prec
            inv = decimal.Decimal(1) / decimal.Decimal(self.p)
            total = decimal.Decimal(0)
            for r, c in self.terms.items():
                root = decimal.Decimal(r) if self.p == 1 else decimal.Decimal(r) ** inv
                total += decimal.Decimal(c.numerator) / decimal.Decimal(c.denominator) * root
            return +total

    def _coerce(self, other) -> "SymbolicSum":
        if isinstance(other, SymbolicSum):
            if other.p != self.p and not (other.is_rational or self.is_rational):
                raise ValueError("cannot combine sums with different metric exponents")
            return other
        if isinstance(other, (int, Fraction, np.integer)):
            return SymbolicSum.constant(int(other) if isinstance(other, np.integer) else other, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        merged = dict(self.terms)
        for r, c in o.terms.items():
            merged[r] = merged.get(r, Fraction(0)) + c
        p = self.p if not self.is_rational else o.p
        return SymbolicSum(p, merged)

    __radd__ = __add__

    def __neg__(self) -> "SymbolicSum":
        return SymbolicSum(self.p, {r: -c for r, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, scalar):
        if isinstance(scalar, np.integer):
            scalar = int(scalar)
        if isinstance(scalar, (int, Fraction)):
            return SymbolicSum(self.p, {r: c * scalar for r, c in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        o = self._coerce(other) if not isinstance(other, float) else NotImplemented
        if o is NotImplemented:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if self.terms == o.terms:
            return 0
        diff = self - o
        if diff.is_rational:
            q = diff.as_fraction()
            return (q > 0) - (q < 0)
        fa, fb = float(self), float(o)
        if abs(fa - fb) > self.REL_TOL * max(1.0, abs(fa), abs(fb)):
            return -1 if fa < fb else 1
        dv = diff.to_decimal()
        return (dv > 0) - (dv < 0)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for r, c in self.terms.items():
            parts.append(f"{c}" if r == 1 else f"{c}*{r}^(1/{self.p})")
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "terms": [{"radicand": str(r), "coef_num": str(c.numerator), "coef_den": str(c.denominator)}
                      for r, c in sorted(self.terms.items())],
            "value": float(self),
        }


def minsum_cost(points: PointSet, clustering: Clustering, p: int = 1) -> SymbolicSum:
    """Sum over clusters of within-cluster unordered-pair l_p distances."""
    groups = _check_clustering(points.n, clustering)
    if p < 1:
        raise InputError("metric exponent p must be >= 1")
    rad = points.lp_radicands(p)
    counts: dict[int, int] = {}
    for g in groups:
        for x, y in itertools.combinations(g, 2):
            v = int(rad[x, y])
            counts[v] = counts.get(v, 0) + 1
    return SymbolicSum.from_radicands(p, counts)


# ---------------------------------------------------------------------------
# graphs


def _normalise_edge(u: int, v: int, n: int) -> tuple[int, int]:
    if not (0 <= u < n and 0 <= v < n):
        raise InputError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
    if u == v:
        raise InputError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Undirected graph stored as a sorted edge list plus adjacency bitsets.

    ``allow_parallel`` admits repeated edges (a multigraph); degrees and edge
    counts then include multiplicity.
    """

    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    regular_degree: int | None = None
    allow_parallel: bool = False
    adjacency: tuple[int, ...] = field(init=False, repr=False, compare=False)
    degrees: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __init__(self, n_vertices: int, edges: Iterable[Sequence[int]],
                 regular_degree: int | None = None, allow_parallel: bool = False):
        if n_vertices < 0:
            raise InputError("vertex count must be nonnegative")
        es = sorted(_normalise_edge(int(e[0]), int(e[1]), n_vertices) for e in edges)
        if not allow_parallel:
            for a, b in zip(es, es[1:]):
                if a == b:
                    raise InputError(f"duplicate edge {a}")
        adj = [0] * n_vertices
        deg = [0] * n_vertices
        for u, v in es:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
            deg[u] += 1
            deg[v] += 1
        if regular_degree is not None and any(x != regular_degree for x in deg):
            raise ValidationError(f"graph is not {regular_degree}-regular", ("regular",))
        object.__setattr__(self, "n_vertices", n_vertices)
        object.__setattr__(self, "edges", tuple(es))
        object.__setattr__(self, "regular_degree", regular_degree)
        object.__setattr__(self, "allow_parallel", allow_parallel)
        object.__setattr__(self, "adjacency", tuple(adj))
        object.__setattr__(self, "degrees", tuple(deg))

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def degree_if_regular(self) -> int | None:
        if not self.degrees:
            return 0
        d = self.degrees[0]
        return d if all(x == d for x in self.degrees) else None

    def require_regular(self) -> int:
        d = self.degree_if_regular()
        if d is None:
            raise ValidationError("graph is not regular", ("regular",))
        return d

    def as_weighted(self, weight: int = 1) -> "WeightedGraph":
        return WeightedGraph(self.n_vertices, [(u, v, weight) for u, v in self.edges])


@dataclass(frozen=True)
class WeightedGraph:
    n_vertices: int
    edges: tuple[tuple[int, int, int], ...]

    def __init__(self, n_vertices: int, edges: Iterable[Sequence[int]]):
        out = []
        seen = set()
        for e in edges:
            u, v = _normalise_edge(int(e[0]), int(e[1]), n_vertices)
            w = e[2]
            if isinstance(w, bool) or not isinstance(w, (int, np.integer)):
                raise InputError(f"edge ({u}, {v}) has non-integer weight {w!r}")
            if w < 0:
                raise InputError(f"edge ({u}, {v}) has negative weight {w}")
            if (u, v) in seen:
                raise InputError(f"duplicate edge {(u, v)}")
            seen.add((u, v))
            out.append((u, v, int(w)))
        object.__setattr__(self, "n_vertices", n_vertices)
        object.__setattr__(self, "edges", tuple(sorted(out)))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def total_weight(self) -> int:
        return sum(w for _, _, w in self.edges)

    def weight_matrix(self) -> np.ndarray:
        big = self.total_weight >= _INT64_SAFE
        mat = np.zeros((self.n_vertices, self.n_vertices), dtype=object if big else np.int64)
        for u, v, w in self.edges:
            mat[u, v] = mat[v, u] = w
        return mat


def _check_partition(n: int, partition: Partition) -> tuple[int, ...]:
    part = tuple(int(x) for x in partition)
    if len(part) != n:
        raise InputError(f"partition has length {len(part)}, expected {n}")
    if any(x not in (0, 1) for x in part):
        raise InputError("partition entries must be 0 or 1")
    return part


def count_bad_edges(graph: Graph, partition: Partition) -> int:
    """Number of edges whose endpoints fall on the same side."""
    part = _check_partition(graph.n_vertices, partition)
    return sum(1 for u, v in graph.edges if part[u] == part[v])


def cut_weight(graph: WeightedGraph, partition: Partition) -> int:
    part = _check_partition(graph.n_vertices, partition)
    return sum(w for u, v, w in graph.edges if part[u] != part[v])


# ---------------------------------------------------------------------------
# CNF


@dataclass(frozen=True)
class Cnf:
    """Clauses over signed literals ``(var, a)``; ``a = 1`` is the negated literal."""

    n_vars: int
    clauses: tuple[tuple[Literal, ...], ...]

    def __init__(self, n_vars: int, clauses: Iterable[Iterable[Sequence[int]]]):
        cl = []
        for j, c in enumerate(clauses):
            lits = tuple((int(v), int(a)) for v, a in c)
            for v, a in lits:
                if not 0 <= v < n_vars:
                    raise InputError(f"clause {j} mentions variable {v} outside [0, {n_vars})")
                if a not in (0, 1):
                    raise InputError(f"clause {j} has sign bit {a}, expected 0 or 1")
            cl.append(lits)
        object.__setattr__(self, "n_vars", n_vars)
        object.__setattr__(self, "clauses", tuple(cl))

    @classmethod
    def from_sign_vectors(cls, n_vars: int, variables: Sequence[int],
                          signs: Iterable[Sequence[int]]) -> "Cnf":
        return cls(n_vars, [list(zip(variables, s)) for s in signs])

    @property
    def m(self) -> int:
        return len(self.clauses)

    def is_3_uniform(self) -> bool:
        return all(len(set(c)) == 3 and len(c) == 3 for c in self.clauses)

    def has_distinct_variables(self) -> bool:
        return all(len({v for v, _ in c}) == len(c) for c in self.clauses)

    def is_linear(self) -> bool:
        sets = [frozenset(c) for c in self.clauses]
        return all(len(a & b) <= 1 for a, b in itertools.combinations(sets, 2))

    def variable_occurrences(self) -> list[int]:
        occ = [0] * self.n_vars
        for c in self.clauses:
            for v in {v for v, _ in c}:
                occ[v] += 1
        return occ

    def is_4_regular(self) -> bool:
        return all(x == 4 for x in self.variable_occurrences())

    def failed_properties(self) -> tuple[str, ...]:
        failed = []
        if not self.is_3_uniform():
            failed.append("3-uniform")
        if not self.has_distinct_variables():
            failed.append("distinct-variables")
        if not self.is_linear():
            failed.append("linear")
        if not self.is_4_regular():
            failed.append("4-regular")
        return tuple(failed)

    def validate_linear_4_regular(self) -> None:
        failed = self.failed_properties()
        if failed:
            raise ValidationError("CNF is not " + ", ".join(failed), failed)

    def nae_satisfied_by(self, values: Sequence[int]) -> bool:
        """``values[i]`` is the truth value of variable i; literal (i, a) is ``values[i] ^ a``."""
        for c in self.clauses:
            seen = {values[v] ^ a for v, a in c}
            if len(seen) != 2:
                return False
        return True
