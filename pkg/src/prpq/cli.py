"""Command-line interface: ``prpq query | bench | gen-graph | gen-3sat``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .bench import GraphGenSpec, gen_3sat_text, gen_graph, load_suite, parse_dimacs, write_bench
from .eval import EvalOptions, evaluate
from .graph import GraphFormatError, dump_graph, load_graph_file
from .query import QuerySyntaxError, parse_query

EXIT_TRUE, EXIT_FALSE, EXIT_TIMEOUT, EXIT_ERROR = 0, 1, 2, 3


def _read_query(arg: str) -> str:
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def cmd_query(args) -> int:
    try:
        g = load_graph_file(args.graph)
        query = parse_query(_read_query(args.query))
        opts = EvalOptions(
            algorithm=args.algo, semantics=args.semantics, visited=args.visited,
            timeout=args.timeout / 1000.0 if args.timeout else None,
            walk_cap=args.walk_cap, oracle=args.oracle,
        )
        result = evaluate(g, query, opts)
    except (OSError, GraphFormatError, QuerySyntaxError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # solver failures and the like
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR + 1
    json.dump(result.to_json(), sys.stdout)
    sys.stdout.write("\n")
    if result.stats.timed_out:
        return EXIT_TIMEOUT
    return EXIT_TRUE if result.answer else EXIT_FALSE


def cmd_bench(args) -> int:
    try:
        with open(args.suite, encoding="utf-8") as fh:
            suite = load_suite(fh.read())
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    write_bench(suite, sys.stdout, jobs=args.jobs)
    return 0


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_gen_graph(args) -> int:
    kwargs = dict(
        nodes=args.nodes, degree=args.degree, node_labels=args.node_labels,
        edge_labels=args.edge_labels, acyclic=args.acyclic, seed=args.seed,
    )
    try:
        if args.attr:
            attrs = []
            for spec in args.attr:
                name, lo, hi = spec.split(":")
                attrs.append((name, int(lo), int(hi)))
            kwargs["numeric_attrs"] = tuple(attrs)
        text = dump_graph(gen_graph(GraphGenSpec(**kwargs)))
        if args.output == "-":
            sys.stdout.write(text)
        else:
            _write(args.output, text)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return 0


def cmd_gen_3sat(args) -> int:
    try:
        with open(args.cnf, encoding="utf-8") as fh:
            _, clauses = parse_dimacs(fh.read())
        g, query = gen_3sat_text(clauses)
        _write(args.graph_out, dump_graph(g))
        _write(args.query_out, query + "\n")
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="prpq", description="Parametric regular path queries over property graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("query", help="evaluate one query and print a JSON result")
    q.add_argument("graph", help="graph file (.pg)")
    q.add_argument("query", help="query text, or a file containing it")
    q.add_argument("--algo", choices=("naive", "optimized", "bruteforce"), default="optimized")
    q.add_argument("--semantics", choices=("walk", "simple"), default="walk")
    q.add_argument("--visited", choices=("paper", "store", "store-digest"), default="store")
    q.add_argument("--timeout", type=float, default=10000, help="milliseconds; 0 disables")
    q.add_argument("--walk-cap", type=int, default=12, help="bruteforce path length cap")
    q.add_argument("--oracle", default="builtin", help="builtin or smtlib:<command>")
    q.add_argument("--seed", type=int, default=0, help="accepted for uniformity; evaluation is deterministic")
    q.set_defaults(func=cmd_query)

    b = sub.add_parser("bench", help="run a benchmark suite and stream CSV")
    b.add_argument("suite", help="JSON suite file")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--seed", type=int, default=0, help="unused; suites carry their own seeds")
    b.set_defaults(func=cmd_bench)

    gg = sub.add_parser("gen-graph", help="write a synthetic graph")
    gg.add_argument("output", help="output path, or - for stdout")
    gg.add_argument("--nodes", type=int, default=1000)
    gg.add_argument("--degree", type=float, default=4.0)
    gg.add_argument("--node-labels", type=int, default=1)
    gg.add_argument("--edge-labels", type=int, default=3)
    gg.add_argument("--attr", action="append", help="numeric attribute name:lo:hi (repeatable)")
    gg.add_argument("--acyclic", action="store_true")
    gg.add_argument("--seed", type=int, default=0)
    gg.set_defaults(func=cmd_gen_graph)

    gs = sub.add_parser("gen-3sat", help="turn a DIMACS CNF into a graph and a query")
    gs.add_argument("cnf")
    gs.add_argument("graph_out")
    gs.add_argument("query_out")
    gs.add_argument("--seed", type=int, default=0, help="unused; the reduction is deterministic")
    gs.set_defaults(func=cmd_gen_3sat)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
