"""Readers and writers for point, graph and CNF files.

Point files: ``n d`` header then ``n`` rows of ``d`` integers, or JSON
``{"n": .., "d": .., "coords": [[..]]}``.  Graph files: DIMACS-like
``p edge N M`` header and 1-indexed ``e u v [w]`` lines.  CNF files: DIMACS
``p cnf N M``; literal ``+i`` is the positive literal of variable i, ``-i``
its negation.  Every parser reports the offending line number.
"""
from __future__ import annotations

import json
from pathlib import Path

from .core import Cnf, Graph, PointSet, WeightedGraph
from .errors import InputError, ParseError


def _read(path) -> tuple[str, str]:
    p = Path(path)
    try:
        return p.read_text(), str(p)
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror or exc}", source=str(p)) from exc


def _ints(tokens: list[str], lineno: int, source: str | None) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", lineno, source) from None


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(("c", "#", "%")):
            continue
        yield lineno, line.split()


# ---------------------------------------------------------------------------
# points


def parse_points(text: str, source: str | None = None) -> PointSet:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_points_json(text, source)
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty point file", 1, source)
    lineno, head = lines[0]
    if len(head) != 2:
        raise ParseError("header must be 'n d'", lineno, source)
    n, d = _ints(head, lineno, source)
    if n < 1 or d < 1:
        raise ParseError("n and d must be positive", lineno, source)
    body = lines[1:]
    if len(body) != n:
        where = body[-1][0] if body else lineno
        raise ParseError(f"expected {n} point rows, found {len(body)}", where, source)
    rows = []
    for ln, toks in body:
        if len(toks) != d:
            raise ParseError(f"expected {d} coordinates, found {len(toks)}", ln, source)
        rows.append(_ints(toks, ln, source))
    try:
        return PointSet(rows)
    except InputError as exc:
        raise ParseError(str(exc), None, source) from exc


def _parse_points_json(text: str, source: str | None) -> PointSet:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, source) from exc
    if not isinstance(obj, dict) or "coords" not in obj:
        raise ParseError("JSON point file needs a 'coords' field", 1, source)
    coords = obj["coords"]
    if not isinstance(coords, list) or not all(isinstance(r, list) for r in coords):
        raise ParseError("'coords' must be a list of lists", 1, source)
    if "n" in obj and obj["n"] != len(coords):
        raise ParseError(f"'n' is {obj['n']} but {len(coords)} rows given", 1, source)
    if coords and "d" in obj and any(len(r) != obj["d"] for r in coords):
        raise ParseError(f"every row must have d={obj['d']} coordinates", 1, source)
    for r in coords:
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in r):
            raise ParseError("coordinates must be integers", 1, source)
    try:
        return PointSet(coords)
    except InputError as exc:
        raise ParseError(str(exc), 1, source) from exc


def read_points(path) -> PointSet:
    text, src = _read(path)
    return parse_points(text, src)


def format_points(points: PointSet) -> str:
    lines = [f"{points.n} {points.d}"]
    lines += [" ".join(str(c) for c in row) for row in points.rows()]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# graphs


def _parse_edges(text: str, source: str | None):
    n = m = None
    edges = []
    weighted = None
    header_line = None
    for lineno, toks in _content_lines(text):
        if toks[0] == "p":
            if n is not None:
                raise ParseError("duplicate problem line", lineno, source)
            if len(toks) != 4 or toks[1] not in ("edge", "edges", "col"):
                raise ParseError("problem line must be 'p edge N M'", lineno, source)
            n, m = _ints(toks[2:], lineno, source)
            header_line = lineno
            continue
        if toks[0] != "e":
            raise ParseError(f"unexpected line type {toks[0]!r}", lineno, source)
        if n is None:
            raise ParseError("edge before problem line", lineno, source)
        if len(toks) not in (3, 4):
            raise ParseError("edge line must be 'e u v' or 'e u v w'", lineno, source)
        vals = _ints(toks[1:], lineno, source)
        is_w = len(vals) == 3
        if weighted is None:
            weighted = is_w
        elif weighted != is_w:
            raise ParseError("mixed weighted and unweighted edge lines", lineno, source)
        u, v = vals[0], vals[1]
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"vertex out of range 1..{n}", lineno, source)
        edges.append((lineno, u - 1, v - 1, vals[2] if is_w else 1))
    if n is None:
        raise ParseError("missing 'p edge N M' line", None, source)
    if m != len(edges):
        raise ParseError(f"header declares {m} edges but {len(edges)} found", header_line, source)
    return n, edges, bool(weighted)


def _check_simple(edges, source):
    seen = {}
    for lineno, u, v, _ in edges:
        if u == v:
            raise ParseError("self-loop", lineno, source)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate edge (first on line {seen[key]})", lineno, source)
        seen[key] = lineno


def parse_graph(text: str, source: str | None = None, allow_parallel: bool = False) -> Graph:
    n, edges, _ = _parse_edges(text, source)
    if not allow_parallel:
        _check_simple(edges, source)
    else:
        for lineno, u, v, _ in edges:
            if u == v:
                raise ParseError("self-loop", lineno, source)
    return Graph(n, [(u, v) for _, u, v, _ in edges], allow_parallel=allow_parallel)


def parse_weighted_graph(text: str, source: str | None = None) -> WeightedGraph:
    n, edges, _ = _parse_edges(text, source)
    _check_simple(edges, source)
    for lineno, _, _, w in edges:
        if w < 0:
            raise ParseError("negative weight", lineno, source)
    return WeightedGraph(n, [(u, v, w) for _, u, v, w in edges])


def read_graph(path, allow_parallel: bool = False) -> Graph:
    text, src = _read(path)
    return parse_graph(text, src, allow_parallel)


def read_weighted_graph(path) -> WeightedGraph:
    text, src = _read(path)
    return parse_weighted_graph(text, src)


def format_graph(graph: Graph | WeightedGraph) -> str:
    lines = [f"p edge {graph.n_vertices} {graph.m}"]
    if isinstance(graph, WeightedGraph):
        lines += [f"e {u + 1} {v + 1} {w}" for u, v, w in graph.edges]
    else:
        lines += [f"e {u + 1} {v + 1}" for u, v in graph.edges]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# CNF


def parse_cnf(text: str, source: str | None = None) -> Cnf:
    n = m = None
    header_line = None
    clauses = []
    pending: list[int] = []
    pending_line = None
    for lineno, toks in _content_lines(text):
        if toks[0] == "p":
            if n is not None:
                raise ParseError("duplicate problem line", lineno, source)
            if len(toks) != 4 or toks[1] != "cnf":
                raise ParseError("problem line must be 'p cnf N M'", lineno, source)
            n, m = _ints(toks[2:], lineno, source)
            header_line = lineno
            continue
        if n is None:
            raise ParseError("clause before problem line", lineno, source)
        for lit in _ints(toks, lineno, source):
            if pending_line is None:
                pending_line = lineno
            if lit == 0:
                if len(pending) != 3:
                    raise ParseError(f"clause has {len(pending)} literals, expected 3",
                                     pending_line, source)
                clauses.append([(abs(x) - 1, 0 if x > 0 else 1) for x in pending])
                pending, pending_line = [], None
                continue
            if abs(lit) > n:
                raise ParseError(f"literal {lit} exceeds variable count {n}", lineno, source)
            pending.append(lit)
    if n is None:
        raise ParseError("missing 'p cnf N M' line", None, source)
    if pending:
        raise ParseError("last clause is not terminated by 0", pending_line, source)
    if m != len(clauses):
        raise ParseError(f"header declares {m} clauses but {len(clauses)} found", header_line, source)
    return Cnf(n, clauses)


def read_cnf(path) -> Cnf:
    text, src = _read(path)
    return parse_cnf(text, src)


def format_cnf(cnf: Cnf) -> str:
    lines = [f"p cnf {cnf.n_vars} {cnf.m}"]
    for c in cnf.clauses:
        lits = [str((v + 1) * (-1 if a else 1)) for v, a in c]
        lines.append(" ".join(lits) + " 0")
    return "\n".join(lines) + "\n"
