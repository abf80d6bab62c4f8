"""Command-line entry point: ``micropolish <subcommand> ...``.

Exit codes: 0 success (or polishing converged), 1 usage/IO/parse error,
2 polishing hit a cycle, 3 polishing hit the iteration cap, 4 the clique
count cap was exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

from . import __version__
from .cliques import CliqueCapExceeded, enumerate_maximal_cliques, format_clusters, parse_clusters
from .evaluate import accuracy, cluster_stats
from .graph import GraphFormatError, load_edge_list, save_edge_list
from .instances import (REWIRE_MODES, TARGET_POOLS, ZipfParams, gen_planted, gen_theorem3_graph,
                        gen_theorem5_graph, gen_theorem6_graph, gen_zipf_graph)
from .polishing import CAP_REACHED, CONVERGED, CYCLE_DETECTED, DEFAULT_TAU, polish
from .similarity import (Jaccard, build_similarity_graph_from_db, load_transactions, measure_to_dict,
                         neighbor_intersections, parse_measure, record_intersections)

log = logging.getLogger("micropolish")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CYCLE = 2
EXIT_CAP = 3
EXIT_CLIQUE_CAP = 4

_STATUS_EXIT = {CONVERGED: EXIT_OK, CYCLE_DETECTED: EXIT_CYCLE, CAP_REACHED: EXIT_CAP}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _dump_json(path: str | None, obj: dict) -> None:
    _write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _config(args: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}


def _threads(args) -> int:
    return args.threads


def _measure(args):
    return parse_measure(args.measure, k=args.k, theta=args.theta)


def _add_measure_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--measure", choices=("kcommon", "jaccard", "pmi"), default="jaccard")
    p.add_argument("--k", type=int, help="common-neighbour count for --measure kcommon")
    p.add_argument("--theta", type=float, help="threshold for --measure jaccard|pmi")
    p.add_argument("--tau", type=int, default=DEFAULT_TAU, help="maximum polishing iterations")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threads", type=int, default=0, help="worker threads (0 = all cores)")
    p.add_argument("--backend", choices=("numba", "numpy"), default=None)


# -- subcommands -----------------------------------------------------------------

def cmd_gen(args) -> int:
    manifest: dict = {"generator": args.kind}
    truth = None
    if args.kind == "planted":
        inst = gen_planted(args.n, args.h, args.clique_size, args.b, args.p, args.seed,
                           rewire=args.rewire, targets=args.targets)
        g, truth = inst.graph, inst.truth
        manifest = inst.manifest()
    elif args.kind == "theorem3":
        g, _ = gen_theorem3_graph(args.k)
        manifest["k"] = args.k
    elif args.kind == "theorem5":
        g = gen_theorem5_graph(args.n)
        manifest["n"] = args.n
    elif args.kind == "theorem6":
        g, _ = gen_theorem6_graph(args.m1, args.m2, args.n)
        manifest.update(m1=args.m1, m2=args.m2, n=args.n)
    else:
        params = ZipfParams(args.n, args.alpha, args.delta, args.beta, args.seed)
        g = gen_zipf_graph(params)
        manifest.update(n=args.n, alpha=args.alpha, delta=args.delta, beta=args.beta, seed=args.seed)
    _write(args.out, save_edge_list(g))
    if args.truth:
        if truth is None:
            raise SystemExit("--truth is only available for planted instances")
        _write(args.truth, format_clusters(truth))
    if args.manifest:
        manifest["vertices"] = g.n
        manifest["edges"] = g.m
        _dump_json(args.manifest, manifest)
    return EXIT_OK


def cmd_pairs(args) -> int:
    t0 = time.perf_counter()
    if args.transactions:
        db, _ = load_transactions(_read(args.input))
        pc = record_intersections(db, args.min_count, backend=args.backend, threads=_threads(args))
    else:
        g = load_edge_list(_read(args.input))
        pc = neighbor_intersections(g, args.min_count, backend=args.backend, threads=_threads(args))
    _write(args.out, pc.dumps())
    log.info("%d pairs, work %d, %.3fs", len(pc), pc.work, time.perf_counter() - t0)
    return EXIT_OK


def _load_db(args):
    db, _ = load_transactions(_read(args.input))
    ratio = args.max_df_ratio if args.max_df_ratio > 0 else None
    return db.filter_items(args.min_df, ratio)


def cmd_build(args) -> int:
    db = _load_db(args)
    g = build_similarity_graph_from_db(db, Jaccard(args.record_theta), backend=args.backend,
                                       threads=_threads(args))
    _write(args.out, save_edge_list(g))
    return EXIT_OK


def cmd_polish(args) -> int:
    g = load_edge_list(_read(args.input))
    t0 = time.perf_counter()
    out, report = polish(g, _measure(args), args.tau, backend=args.backend, threads=_threads(args))
    elapsed = time.perf_counter() - t0
    if args.graph_out:
        _write(args.graph_out, save_edge_list(out))
    _dump_json(args.out, {"config": _config(args), "measure": measure_to_dict(_measure(args)),
                          "polish": report.to_dict(), "seconds": elapsed})
    _warn_status(report)
    return _STATUS_EXIT[report.status]


def cmd_cliques(args) -> int:
    g = load_edge_list(_read(args.input))
    clusters = enumerate_maximal_cliques(g, args.min_size, args.max_cliques)
    _write(args.out, format_clusters(clusters))
    return EXIT_OK


def cmd_eval(args) -> int:
    truth = parse_clusters(_read(args.truth))
    found = parse_clusters(_read(args.found))
    if args.drop_singletons:
        found = [c for c in found if len(c) > 1]
    rep = accuracy(truth, found)
    _dump_json(args.out, {"config": _config(args), "accuracy": rep.to_dict(tables=args.tables),
                          "truth_clusters": len(truth), "found_clusters": len(found)})
    return EXIT_OK


def cmd_stats(args) -> int:
    clusters = parse_clusters(_read(args.clusters))
    if args.graph:
        n = load_edge_list(_read(args.graph)).n
    elif args.n is not None:
        n = args.n
    else:
        n = max((max(c) for c in clusters if c), default=-1) + 1
    _dump_json(args.out, {"config": _config(args), "stats": cluster_stats(clusters, n).to_dict()})
    return EXIT_OK


def cmd_pipeline(args) -> int:
    timings = {}
    t0 = time.perf_counter()
    threads = _threads(args)
    if args.transactions:
        db = _load_db(args)
        g = build_similarity_graph_from_db(db, Jaccard(args.record_theta), backend=args.backend, threads=threads)
    else:
        g = load_edge_list(_read(args.input))
    timings["build"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    measure = _measure(args)
    polished, report = polish(g, measure, args.tau, backend=args.backend, threads=threads)
    timings["polish"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    clusters = enumerate_maximal_cliques(polished, args.min_size, args.max_cliques)
    timings["enumerate"] = time.perf_counter() - t0
    _write(args.clusters, format_clusters(clusters))
    if args.graph_out:
        _write(args.graph_out, save_edge_list(polished))
    result = {
        "config": _config(args),
        "measure": measure_to_dict(measure),
        "graph": {"vertices": g.n, "edges": g.m},
        "polish": report.to_dict(),
        "stats": cluster_stats(clusters, g.n).to_dict(),
        "seconds": timings,
    }
    if args.truth:
        result["accuracy"] = accuracy(parse_clusters(_read(args.truth)), clusters).to_dict()
    _dump_json(args.out, result)
    _warn_status(report)
    return _STATUS_EXIT[report.status]


def _warn_status(report) -> None:
    if report.status == CYCLE_DETECTED:
        log.warning("polishing entered a cycle of period %d after %d iterations", report.period, report.iterations)
    elif report.status == CAP_REACHED:
        log.warning("polishing did not converge within tau=%d iterations", report.tau)


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="micropolish", description="Micro-clustering by graph polishing and maximal cliques.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate a benchmark or adversarial graph")
    p.add_argument("kind", choices=("planted", "theorem3", "theorem5", "theorem6", "zipf"))
    p.add_argument("--n", type=int, default=5000)
    p.add_argument("--h", type=int, default=100)
    p.add_argument("--clique-size", type=int, default=30)
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--rewire", choices=REWIRE_MODES, default="edge")
    p.add_argument("--targets", choices=TARGET_POOLS, default="planted")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--m1", type=int, default=1)
    p.add_argument("--m2", type=int, default=2)
    p.add_argument("--alpha", type=float, default=100.0)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=3.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--truth", help="write planted ground-truth clusters here")
    p.add_argument("--manifest", help="write instance manifest JSON here")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("pairs", help="dump closed-neighbourhood (or record) intersection counts")
    p.add_argument("input")
    p.add_argument("--transactions", action="store_true", help="input is a transaction file")
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=cmd_pairs)

    def add_db_args(p):
        p.add_argument("--record-theta", type=float, default=0.2, help="Jaccard threshold between records")
        p.add_argument("--min-df", type=int, default=10, help="drop items in fewer records than this")
        p.add_argument("--max-df-ratio", type=float, default=0.01,
                       help="drop items in at least this fraction of records (0 disables)")

    p = sub.add_parser("build", help="similarity graph from a transaction file")
    p.add_argument("input")
    add_db_args(p)
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("polish", help="polish an edge-list graph")
    p.add_argument("input")
    _add_measure_args(p)
    p.add_argument("--graph-out", help="write the polished edge list here")
    p.add_argument("--out", help="JSON report path (default stdout)")
    _add_common(p)
    p.set_defaults(func=cmd_polish)

    p = sub.add_parser("cliques", help="enumerate maximal cliques")
    p.add_argument("input")
    p.add_argument("--min-size", type=int, default=2)
    p.add_argument("--max-cliques", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cliques)

    p = sub.add_parser("eval", help="accuracy of found clusters against truth")
    p.add_argument("truth")
    p.add_argument("found")
    p.add_argument("--drop-singletons", action="store_true")
    p.add_argument("--tables", action="store_true", help="include per-cluster best overlaps")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("stats", help="descriptive statistics of a cluster file")
    p.add_argument("clusters")
    p.add_argument("--graph", help="edge list giving the vertex count")
    p.add_argument("--n", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("pipeline", help="build, polish, enumerate and report")
    p.add_argument("input")
    p.add_argument("--transactions", action="store_true", help="input is a transaction file")
    add_db_args(p)
    _add_measure_args(p)
    p.add_argument("--min-size", type=int, default=2)
    p.add_argument("--max-cliques", type=int)
    p.add_argument("--clusters", required=True, help="cluster output file")
    p.add_argument("--graph-out")
    p.add_argument("--truth", help="ground-truth cluster file to score against")
    p.add_argument("--seed", type=int, default=0, help="recorded in the report; the pipeline itself is deterministic")
    p.add_argument("--out", help="JSON report path (default stdout)")
    _add_common(p)
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s")
    try:
        if getattr(args, "tau", 1) < 1:
            parser.error("--tau must be at least 1")
        if getattr(args, "min_size", 1) < 1:
            parser.error("--min-size must be at least 1")
        if hasattr(args, "threads") and args.threads <= 0:
            args.threads = os.cpu_count() or 1
        return args.func(args)
    except CliqueCapExceeded as exc:
        log.error("%s", exc)
        return EXIT_CLIQUE_CAP
    except (GraphFormatError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
