"""Command-line interface: ``clustercut {solve,csp,reduce,verify,gen,bench}``.

Exit codes: 0 ok, 2 unparsable input, 3 cap exceeded, 4 precondition
violated.  Machine-readable output is JSON with sorted keys, so identical
inputs and flags give byte-identical reports.
"""
from __future__ import annotations

import argparse
import csv
import itertools
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from .config import Caps
from .core import Clustering, kmeans_cost, minsum_cost
from .csp import Csp2Instance, solve_exact_target
from .errors import CapError, ClusterCutError, InputError, ParseError
from .generators import random_linear_4regular_cnf, random_points, random_regular_graph, rng_from
from .io import (format_cnf, format_graph, format_points, parse_graph, parse_points, read_cnf,
                 read_graph, read_points, read_weighted_graph)
from .matmul import Kernel, OpCounter, matmul
from .oracles import brute_kmeans, brute_maxcut, brute_minsum
from .reductions import (GadgetGraph, badedge_bound_exhaustive, badedge_bound_sampled,
                         coloring_to_kmeans, conservation_terms, embed_graph, maxcut_to_2means,
                         maxcut_to_2minsum, minsum_to_maxcut, nae3sat_to_maxcut,
                         orient_edges, predicted_2means_cost, predicted_2minsum_cost)
from .solvers import contiguous_groups, solve_2means_exact, solve_2minsum_exact, solve_maxcut_fast

KERNELS = [k.value for k in Kernel]


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _report(rep, counters: bool) -> dict:
    body = rep.to_json()
    if not counters:
        body.pop("counters", None)
    return body


# ---------------------------------------------------------------------------
# solve


def cmd_solve(args, caps: Caps) -> int:
    counter = OpCounter()
    if args.problem == "2means":
        points = read_points(args.input)
        if args.algo == "brute":
            rep = brute_kmeans(points, 2, caps)
        elif args.algo == "csp":
            rep = solve_2means_exact(points, args.kernel, caps, counter, threads=args.threads)
        else:
            raise InputError(f"2means supports --algo csp|brute, not {args.algo}")
    elif args.problem == "kmeans":
        if args.algo != "brute":
            raise InputError("kmeans for general k is only available with --algo brute")
        rep = brute_kmeans(read_points(args.input), args.k, caps)
    elif args.problem == "2minsum":
        points = read_points(args.input)
        if args.algo == "brute":
            rep = brute_minsum(points, 2, args.p, caps)
        elif args.algo == "maxcut":
            rep = solve_2minsum_exact(points, args.p, args.kernel, caps, counter)
        else:
            raise InputError(f"2minsum supports --algo maxcut|brute, not {args.algo}")
    else:
        graph = read_weighted_graph(args.input)
        if args.algo == "brute":
            rep = brute_maxcut(graph, caps)
        elif args.algo == "fast":
            rep = solve_maxcut_fast(graph, args.kernel, caps, counter)
        else:
            raise InputError(f"maxcut supports --algo fast|brute, not {args.algo}")
    _emit(_dump(_report(rep, args.counters)), args.out)
    return 0


def cmd_csp(args, caps: Caps) -> int:
    try:
        obj = json.loads(Path(args.input).read_text())
    except OSError as exc:
        raise ParseError("cannot read file", source=args.input) from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, args.input) from exc
    try:
        inst = Csp2Instance.from_json(obj, caps.w_max)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed CSP instance: {exc}", source=args.input) from exc
    if inst.n_vars != 3:
        raise InputError(f"the exact-target solver takes 3 variables, got {inst.n_vars}")
    hit = solve_exact_target(inst, args.kernel, crossover=caps.strassen_crossover)
    _emit(_dump({"witness": "none" if hit is None else list(hit)}), args.out)
    return 0


# ---------------------------------------------------------------------------
# reduce


def _write_instance(text: str, sidecar: dict, args) -> None:
    _emit(text, args.out)
    side_path = args.sidecar or (args.out + ".json" if args.out else None)
    if side_path is not None:
        Path(side_path).write_text(_dump(sidecar))


def cmd_reduce(args, caps: Caps) -> int:
    rng = None if args.seed is None else rng_from(args.seed)
    if args.reduction == "nae3sat-to-maxcut":
        gadget = nae3sat_to_maxcut(read_cnf(args.input))
        text = format_graph(gadget.graph)
        side = gadget.sidecar()
        # round trip through the file formats before handing anything out
        again = GadgetGraph.from_sidecar(parse_graph(text, allow_parallel=True), side)
        again.graph.require_regular()
        _write_instance(text, side, args)
        return 0
    if args.reduction == "minsum-to-maxcut":
        points = read_points(args.input)
        graph = minsum_to_maxcut(points, args.p, args.scale)
        side = {"reduction": "minsum-to-maxcut", "p": args.p, "exact": args.p == 1,
                "scale": 1 if args.p == 1 else args.scale, "total_weight": graph.total_weight}
        _write_instance(format_graph(graph), side, args)
        return 0
    graph = read_graph(args.input)
    if args.reduction == "maxcut-to-2means":
        inst = maxcut_to_2means(graph, args.t, rng)
    elif args.reduction == "coloring-to-kmeans":
        inst = coloring_to_kmeans(graph, args.k, rng)
    else:
        inst = maxcut_to_2minsum(graph, args.t, args.p, rng)
    text = format_points(inst.points)
    if not np.array_equal(parse_points(text).coords, inst.points.coords):
        raise AssertionError("emitted point file does not round-trip")
    _write_instance(text, inst.to_json(), args)
    return 0


# ---------------------------------------------------------------------------
# verify


def _partitions(n: int, args):
    """Nonempty 2-partitions: all of them, or ``--samples`` random ones."""
    if args.samples is None:
        for bits in itertools.product((0, 1), repeat=n - 1):
            part = (0,) + bits
            if any(part):
                yield part
        return
    rng = rng_from(args.seed)
    done = 0
    while done < args.samples:
        part = tuple(int(x) for x in rng.integers(0, 2, size=n))
        if 0 < sum(part) < n:
            done += 1
            yield part


def _check_caps_for_enumeration(n: int, args, caps: Caps) -> None:
    if args.samples is None and n - 1 > caps.maxcut_oracle_n:
        raise CapError(f"exhaustive enumeration over {n} vertices exceeds the cap; use --samples")


def cmd_verify(args, caps: Caps) -> int:
    if args.claim == "lemmaA1":
        graph = read_graph(args.input, allow_parallel=True)
        try:
            side = json.loads(Path(args.sidecar).read_text())
        except OSError as exc:
            raise ParseError("cannot read sidecar", source=args.sidecar) from exc
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, args.sidecar) from exc
        gadget = GadgetGraph.from_sidecar(graph, side)
        if args.samples is None:
            res = badedge_bound_exhaustive(gadget)
        else:
            res = badedge_bound_sampled(gadget, args.samples, rng_from(args.seed))
        res["pass"] = res["violations"] == 0
    elif args.claim == "conservation":
        points = read_points(args.input)
        _check_caps_for_enumeration(points.n, args, caps)
        checked = failures = 0
        for part in _partitions(points.n, args):
            within, cut, total = conservation_terms(points, part, args.p)
            checked += 1
            failures += within + cut != total
        res = {"checked": checked, "failures": failures, "pass": failures == 0, "p": args.p}
    else:
        graph = read_graph(args.input)
        _check_caps_for_enumeration(graph.n_vertices, args, caps)
        graph.require_regular()
        # the identities hold for any vertex count, so skip the decision-problem wrappers
        points = embed_graph(graph, orient_edges(graph))
        if args.claim == "claim31":
            check = lambda part: kmeans_cost(points, Clustering(part, 2)) == predicted_2means_cost(graph, part)  # noqa: E731
        else:
            check = lambda part: minsum_cost(points, Clustering(part, 2), args.p) == \
                predicted_2minsum_cost(graph, part, args.p)  # noqa: E731
        checked = failures = 0
        for part in _partitions(graph.n_vertices, args):
            checked += 1
            failures += not check(part)
        res = {"checked": checked, "failures": failures, "pass": failures == 0}
    _emit(_dump(res), args.out)
    return 0 if res["pass"] else 1


# ---------------------------------------------------------------------------
# gen


def cmd_gen(args, caps: Caps) -> int:
    if args.kind == "points":
        text = format_points(random_points(args.n, args.d, args.coord_max, args.seed))
    elif args.kind == "regular":
        text = format_graph(random_regular_graph(args.n, args.degree, args.seed))
    else:
        text = format_cnf(random_linear_4regular_cnf(args.vars, args.seed))
    _emit(text, args.out)
    return 0


# ---------------------------------------------------------------------------
# bench


BENCH_FIELDS = ["n", "kernel", "domain_union", "max_signature_domain_sum", "domain_bound",
                "csp_equals_brute", "queries", "solver_mm_ops", "probe_dim", "probe_ops",
                "fitted_exponent", "csp_seconds", "brute_seconds"]


def probe_ops(dim: int, kernel: Kernel | str, crossover: int) -> int:
    """Operations the kernel spends on one full-domain dim x dim boolean product."""
    counter = OpCounter()
    ones = np.ones((dim, dim), dtype=np.int64)
    matmul(ones, ones, kernel, counter, crossover)
    return counter.ops


def fit_exponent(dims, ops) -> float:
    slope, _ = np.polyfit(np.log(np.asarray(dims, dtype=float)), np.log(np.asarray(ops, dtype=float)), 1)
    return float(slope)


def run_bench(sizes, kernel: Kernel | str, crossover: int, seed: int, d: int = 2,
              coord_max: int = 3, caps: Caps | None = None) -> list[dict]:
    caps = caps or Caps()
    rows = []
    for n in sizes:
        points = random_points(n, d, coord_max, seed + n)
        counter = OpCounter()
        stats: dict = {}
        t0 = time.perf_counter()
        rep = solve_2means_exact(points, kernel, caps, counter, stats=stats)
        t1 = time.perf_counter()
        ref = brute_kmeans(points, 2, caps)
        t2 = time.perf_counter()
        dim = 2 ** math.ceil(n / 3)
        rows.append({
            "n": n,
            "kernel": Kernel(kernel).value,
            "domain_union": sum(2 ** len(g) for g in contiguous_groups(n)),
            "max_signature_domain_sum": stats["max_domain_sum"],
            "domain_bound": 3 * dim,
            "csp_equals_brute": rep.optimum == ref.optimum,
            "queries": stats["queries"],
            "solver_mm_ops": counter.ops,
            "probe_dim": dim,
            "probe_ops": probe_ops(dim, kernel, crossover),
            "csp_seconds": round(t1 - t0, 4),
            "brute_seconds": round(t2 - t1, 4),
        })
    if len(rows) >= 2 and len({r["probe_dim"] for r in rows}) >= 2:
        slope = round(fit_exponent([r["probe_dim"] for r in rows], [r["probe_ops"] for r in rows]), 4)
    else:
        slope = float("nan")
    for r in rows:
        r["fitted_exponent"] = slope
    return rows


def kernel_crosscheck(size: int, seed: int, crossover: int) -> bool:
    rng = rng_from(seed)
    a = rng.integers(-100, 101, size=(size, size))
    b = rng.integers(-100, 101, size=(size, size))
    return bool(np.array_equal(matmul(a, b, Kernel.NAIVE), matmul(a, b, Kernel.STRASSEN, crossover=crossover)))


def cmd_bench(args, caps: Caps) -> int:
    sizes = [int(x) for x in args.sizes.split(",")]
    rows = run_bench(sizes, args.kernel, args.crossover, args.seed, args.d, args.coord_max, caps)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=BENCH_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            out.close()
    summary = {"fitted_exponent": rows[0]["fitted_exponent"] if rows else None,
               "csp_equals_brute": all(r["csp_equals_brute"] for r in rows)}
    if args.kernel_check:
        summary["strassen_equals_naive"] = kernel_crosscheck(args.kernel_check, args.seed,
                                                             caps.strassen_crossover)
    sys.stderr.write(_dump(summary))
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="clustercut",
        description="Exact 2-means / 2-min-sum solving, hardness reductions and their verifiers. "
                    "Caps can be raised with CLUSTERCUT_* environment variables.")
    sub = ap.add_subparsers(dest="command", required=True)

    def out_flag(p):
        p.add_argument("-o", "--out", help="write output here instead of stdout")

    s = sub.add_parser("solve", help="solve an instance exactly")
    s.add_argument("problem", choices=["2means", "kmeans", "2minsum", "maxcut"])
    s.add_argument("input", help="point file (2means, kmeans, 2minsum) or graph file (maxcut)")
    s.add_argument("--algo", default=None,
                   help="csp|brute for 2means, brute for kmeans, maxcut|brute for 2minsum, "
                        "fast|brute for maxcut (default: the fast method)")
    s.add_argument("--kernel", choices=KERNELS, default=Kernel.BITPACKED.value,
                   help="matrix kernel used for triangle detection")
    s.add_argument("--threads", type=int, default=1, help="worker threads for the 2-means search")
    s.add_argument("--counters", action="store_true", help="include work and MM operation counters")
    s.add_argument("--p", type=int, default=1, help="l_p exponent for 2minsum")
    s.add_argument("--k", type=int, default=2, help="number of clusters for kmeans")
    out_flag(s)

    c = sub.add_parser("csp", help="weighted 2-CSP utilities")
    c.add_argument("action", choices=["solve"])
    c.add_argument("input", help="JSON instance {domains, vertex_weights, pair_weights, K_v, K_e}")
    c.add_argument("--kernel", choices=KERNELS, default=Kernel.BITPACKED.value)
    out_flag(c)

    r = sub.add_parser("reduce", help="build a reduced instance plus a JSON sidecar")
    r.add_argument("reduction", choices=["maxcut-to-2means", "coloring-to-kmeans", "maxcut-to-2minsum",
                                         "minsum-to-maxcut", "nae3sat-to-maxcut"])
    r.add_argument("input", help="graph, point or CNF file, depending on the reduction")
    r.add_argument("--t", type=int, default=0, help="bad-edge target for the max-cut reductions")
    r.add_argument("--k", type=int, default=3, help="colour count for coloring-to-kmeans")
    r.add_argument("--p", type=int, default=1, help="l_p exponent")
    r.add_argument("--scale", type=int, default=10**6, help="weight scale for minsum-to-maxcut with p >= 2")
    r.add_argument("--seed", type=int, default=None, help="randomise edge orientation with this seed")
    r.add_argument("--sidecar", help="sidecar path (default: <out>.json when --out is given)")
    out_flag(r)

    v = sub.add_parser("verify", help="check a closed-form identity or bound over partitions")
    v.add_argument("claim", choices=["claim31", "claim62", "lemmaA1", "conservation"])
    v.add_argument("input", help="graph file (claim31, claim62, lemmaA1) or point file (conservation)")
    v.add_argument("sidecar", nargs="?", help="gadget sidecar (lemmaA1)")
    mode = v.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="every partition (the default)")
    mode.add_argument("--samples", type=int, default=None, help="this many random partitions")
    v.add_argument("--seed", type=int, default=0, help="seed for --samples")
    v.add_argument("--p", type=int, default=1, help="l_p exponent (claim62, conservation)")
    out_flag(v)

    g = sub.add_parser("gen", help="seeded instance generators")
    g.add_argument("kind", choices=["points", "regular", "cnf"])
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--n", type=int, default=10)
    g.add_argument("--d", type=int, default=2)
    g.add_argument("--coord-max", type=int, default=3)
    g.add_argument("--degree", type=int, default=3)
    g.add_argument("--vars", type=int, default=6)
    out_flag(g)

    b = sub.add_parser("bench", help="size sweep: CSV of domain sizes, MM operation counts and timings")
    b.add_argument("--sizes", default="6,9,12", help="comma-separated point counts")
    b.add_argument("--kernel", choices=KERNELS, default=Kernel.NAIVE.value)
    b.add_argument("--crossover", type=int, default=1,
                   help="Strassen crossover for the MM probe (1 = recurse to scalars)")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--d", type=int, default=2)
    b.add_argument("--coord-max", type=int, default=3)
    b.add_argument("--kernel-check", type=int, default=0, metavar="SIZE",
                   help="also compare Strassen (configured crossover) with the naive kernel "
                        "on random SIZE x SIZE matrices")
    out_flag(b)
    return ap


_DEFAULT_ALGO = {"2means": "csp", "kmeans": "brute", "2minsum": "maxcut", "maxcut": "fast"}

COMMANDS = {"solve": cmd_solve, "csp": cmd_csp, "reduce": cmd_reduce, "verify": cmd_verify,
            "gen": cmd_gen, "bench": cmd_bench}


def _validate(args) -> None:
    if args.command == "solve":
        args.algo = args.algo or _DEFAULT_ALGO[args.problem]
        if args.threads < 1:
            raise InputError("--threads must be at least 1")
        if args.p < 1 or args.k < 1:
            raise InputError("--p and --k must be positive")
    if args.command == "verify":
        if args.claim == "lemmaA1" and args.sidecar is None:
            raise InputError("lemmaA1 needs the gadget sidecar")
        if args.samples is not None and args.samples < 1:
            raise InputError("--samples must be positive")
    if args.command == "bench" and args.crossover < 1:
        raise InputError("--crossover must be at least 1")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        caps = Caps.from_env()
        _validate(args)
        return COMMANDS[args.command](args, caps)
    except ClusterCutError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
    except ValueError as exc:  # bad environment overrides
        sys.stderr.write(f"error: {exc}\n")
        return 4


if __name__ == "__main__":
    sys.exit(main())
