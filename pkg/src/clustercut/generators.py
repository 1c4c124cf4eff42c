"""Seeded instance generators and a few named graphs."""
from __future__ import annotations

import itertools

import numpy as np

from .core import Cnf, Graph, PointSet
from .errors import InputError


def rng_from(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_points(n: int, d: int, coord_max: int, seed) -> PointSet:
    rng = rng_from(seed)
    return PointSet(rng.integers(-coord_max, coord_max + 1, size=(n, d)))


def random_regular_graph(n: int, degree: int, seed, max_tries: int = 10_000) -> Graph:
    """Pairing model: shuffle ``degree`` stubs per vertex, pair them up, reject loops and repeats."""
    if (n * degree) % 2 or not 0 <= degree < n:
        raise InputError(f"no simple {degree}-regular graph on {n} vertices")
    rng = rng_from(seed)
    stubs = np.repeat(np.arange(n), degree)
    for _ in range(max_tries):
        rng.shuffle(stubs)
        pairs = stubs.reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        edges = {(int(min(a, b)), int(max(a, b))) for a, b in pairs}
        if len(edges) == len(pairs):
            return Graph(n, edges, regular_degree=degree)
    raise RuntimeError(f"pairing model failed {max_tries} times for n={n}, degree={degree}")


def random_linear_4regular_cnf(n_vars: int, seed, max_tries: int = 100_000) -> Cnf:
    """Rejection sampling: 4 slots per variable grouped into triples, random signs."""
    if n_vars % 3 or n_vars < 3:
        raise InputError("a 4-regular 3-uniform CNF needs a variable count divisible by 3")
    rng = rng_from(seed)
    slots = np.repeat(np.arange(n_vars), 4)
    for _ in range(max_tries):
        rng.shuffle(slots)
        triples = slots.reshape(-1, 3)
        if any(len(set(t.tolist())) < 3 for t in triples):
            continue
        signs = rng.integers(0, 2, size=triples.shape)
        clauses = []
        seen: list[frozenset] = []
        ok = True
        for t, s in zip(triples.tolist(), signs.tolist()):
            lits = frozenset(zip(t, s))
            if any(len(lits & other) > 1 for other in seen):
                ok = False
                break
            seen.append(lits)
            clauses.append(list(zip(t, s)))
        if not ok:
            continue
        cnf = Cnf(n_vars, clauses)
        cnf.validate_linear_4_regular()
        return cnf
    raise RuntimeError(f"no linear 4-regular CNF found in {max_tries} tries")


def random_tripartite(sizes, density: float, seed) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    rng = rng_from(seed)
    n1, n2, n3 = sizes
    return (rng.random((n1, n2)) < density, rng.random((n2, n3)) < density,
            rng.random((n1, n3)) < density)


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)], regular_degree=2 if n > 2 else None)


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2), regular_degree=n - 1)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner, regular_degree=3)
