"""Command-line interface: generation, building, querying, benchmarking, verification.

Machine-readable results go to stdout, diagnostics to stderr.  Exit codes:
0 success, 1 domain error, 2 usage error.  RLC_LOG sets the log level.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

from . import baselines, builder, workload as workload_mod
from .errors import RlcError
from .graph import dump_edge_list, generate_ba, generate_er, graph_stats, load_edge_list
from .index import deserialize, index_stats, query, query_star, serialize


def _configure_logging() -> None:
    level_name = os.environ.get("RLC_LOG", "WARNING").upper()
    level = getattr(logging, level_name, logging.WARNING)
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )


def _parse_range(text: str) -> tuple[float, float]:
    lo, _, hi = text.partition(":")
    if not hi:
        hi = lo
    return float(lo), float(hi)


def _int_range(text: str) -> tuple[int, int]:
    lo, hi = _parse_range(text)
    return int(lo), int(hi)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rlc",
        description=(
            "Build and query a reachability index for path constraints of the "
            "form 'one or more repetitions of a label sequence'."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-graph", help="generate a synthetic edge-labeled graph")
    p.add_argument("--model", choices=["er", "ba"], required=True)
    p.add_argument("--n", type=int, required=True, help="vertex count")
    p.add_argument("--deg", type=float, help="average degree (er model)")
    p.add_argument("--attach", type=int, help="out-edges per new vertex (ba model)")
    p.add_argument("--labels", type=int, required=True, help="alphabet size")
    p.add_argument("--zipf", type=float, default=2.0, help="label skew exponent")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output edge-list path")

    p = sub.add_parser("gen-workload", help="generate a classified query set")
    p.add_argument("--graph", required=True)
    p.add_argument("--len", type=int, dest="length", required=True)
    p.add_argument("--true", type=int, dest="n_true", required=True)
    p.add_argument("--false", type=int, dest="n_false", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--step-cap", type=int, default=10**7)
    p.add_argument("--max-draws", type=int, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("build", help="build the index for a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("query", help="answer one query against a built index")
    p.add_argument("--index", required=True)
    p.add_argument("--s", required=True, help="source vertex (external id)")
    p.add_argument("--t", required=True, help="target vertex (external id)")
    p.add_argument("--labels", required=True, help="space-separated label names")
    p.add_argument(
        "--star", action="store_true", help="allow zero repetitions (s == t answers true)"
    )

    p = sub.add_parser("stats", help="print graph and/or index statistics as JSON")
    p.add_argument("--graph")
    p.add_argument("--index")

    p = sub.add_parser("bench", help="time evaluators over a workload")
    p.add_argument("--graph", required=True)
    p.add_argument("--workload", required=True)
    p.add_argument(
        "--evaluators",
        default="index,bfs,bibfs",
        help="comma-separated subset of index,bfs,bibfs,etc",
    )
    p.add_argument("--index", help="prebuilt index path (otherwise built with --k)")
    p.add_argument("--k", type=int, help="build parameter when no index is supplied")
    p.add_argument("--repeats", type=int, default=20)
    p.add_argument("--out-csv", help="write the report as CSV here")

    p = sub.add_parser("verify", help="randomized four-way equivalence sweep")
    p.add_argument("--graphs", type=int, default=200)
    p.add_argument("--n", type=_int_range, default=(5, 50), help="vertex range lo:hi")
    p.add_argument("--deg", type=_parse_range, default=(1.0, 6.0))
    p.add_argument("--labels", type=_int_range, default=(2, 4))
    p.add_argument("--k", type=_int_range, default=(1, 3))
    p.add_argument("--seed", type=int, required=True)
    return parser


def _load_graph(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return load_edge_list(fh)


def _cmd_gen_graph(args) -> int:
    if args.model == "er":
        if args.deg is None:
            raise RlcError("--deg is required for the er model")
        g = generate_er(args.n, args.deg, args.labels, args.zipf, args.seed)
    else:
        if args.attach is None:
            raise RlcError("--attach is required for the ba model")
        g = generate_ba(args.n, args.attach, args.labels, args.zipf, args.seed)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        dump_edge_list(g, fh)
    print(f"wrote {g.num_edges} edges over {g.n} vertices to {args.out}")
    return 0


def _cmd_gen_workload(args) -> int:
    g = _load_graph(args.graph)
    w = workload_mod.generate_workload(
        g,
        args.length,
        args.n_true,
        args.n_false,
        args.seed,
        step_cap=args.step_cap,
        max_draws=args.max_draws,
    )
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        workload_mod.save_workload(w, g, fh)
    print(f"wrote {len(w.queries)} queries to {args.out}")
    return 0


def _cmd_build(args) -> int:
    g = _load_graph(args.graph)
    start = time.perf_counter()
    idx = builder.build_index(g, args.k)
    elapsed = time.perf_counter() - start
    blob = serialize(idx)
    with open(args.out, "wb") as fh:
        fh.write(blob)
    stats = index_stats(idx)
    print(
        f"built k={args.k} index with {stats['total_entries']} entries "
        f"in {elapsed:.2f}s ({len(blob)} bytes) -> {args.out}"
    )
    return 0


def _cmd_query(args) -> int:
    with open(args.index, "rb") as fh:
        idx = deserialize(fh.read())
    from .errors import NotFound

    def vertex(name: str) -> int:
        try:
            return idx.vertex_ids[name]
        except KeyError:
            raise NotFound(f"unknown vertex {name!r}") from None

    def label(name: str) -> int:
        try:
            return idx.label_ids[name]
        except KeyError:
            raise NotFound(f"unknown label {name!r}") from None

    s = vertex(args.s)
    t = vertex(args.t)
    constraint = tuple(label(name) for name in args.labels.split())
    answer = (query_star if args.star else query)(idx, s, t, constraint)
    print("true" if answer else "false")
    return 0


def _cmd_stats(args) -> int:
    if not args.graph and not args.index:
        raise RlcError("stats needs --graph and/or --index")
    payload = {}
    if args.graph:
        payload["graph"] = graph_stats(_load_graph(args.graph))
    if args.index:
        with open(args.index, "rb") as fh:
            payload["index"] = index_stats(deserialize(fh.read()))
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def _cmd_bench(args) -> int:
    g = _load_graph(args.graph)
    with open(args.workload, "r", encoding="utf-8", newline="") as fh:
        w = workload_mod.load_workload(fh, g)
    names = [name.strip() for name in args.evaluators.split(",") if name.strip()]
    evaluators = {}
    build_time = None
    for name in names:
        if name == "index":
            if args.index:
                with open(args.index, "rb") as fh:
                    idx = deserialize(fh.read())
            else:
                if args.k is None:
                    raise RlcError("bench needs --index or --k to run the index evaluator")
                start = time.perf_counter()
                idx = builder.build_index(g, args.k)
                build_time = time.perf_counter() - start
                print(f"# built index in {build_time:.2f}s", file=sys.stderr)
            evaluators[name] = (
                lambda s, t, constraint, _idx=idx: query(_idx, s, t, constraint)
            )
        elif name == "bfs":
            evaluators[name] = (
                lambda s, t, constraint, _g=g: baselines.nfa_bfs(_g, s, t, constraint)
            )
        elif name == "bibfs":
            evaluators[name] = (
                lambda s, t, constraint, _g=g: baselines.bibfs(_g, s, t, constraint)
            )
        elif name == "etc":
            if args.k is None:
                raise RlcError("bench needs --k to build the transitive closure")
            start = time.perf_counter()
            etc = baselines.build_etc(g, args.k)
            print(
                f"# built transitive closure in {time.perf_counter() - start:.2f}s",
                file=sys.stderr,
            )
            evaluators[name] = (
                lambda s, t, constraint, _etc=etc: baselines.etc_query(
                    _etc, s, t, constraint
                )
            )
        else:
            raise RlcError(f"unknown evaluator {name!r}")
    report = workload_mod.run_bench(
        evaluators, w, repeats=args.repeats, build_time_hint=build_time
    )
    print(report.format_table())
    if args.out_csv:
        with open(args.out_csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(report.to_csv())
    return 0


def _cmd_verify(args) -> int:
    report = workload_mod.verify_equivalence(
        graph_count=args.graphs,
        n_range=args.n,
        degree_range=args.deg,
        label_range=args.labels,
        k_range=args.k,
        seed=args.seed,
    )
    payload = {
        "graphs": report.graphs,
        "triples": report.triples,
        "mismatches": report.mismatches,
        "condensed_violations": report.condensed_violations,
        "roundtrip_failures": report.roundtrip_failures,
        "failures": report.failures,
    }
    print(json.dumps(payload, indent=2))
    return 0 if report.ok else 1


_COMMANDS = {
    "gen-graph": _cmd_gen_graph,
    "gen-workload": _cmd_gen_workload,
    "build": _cmd_build,
    "query": _cmd_query,
    "stats": _cmd_stats,
    "bench": _cmd_bench,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    _configure_logging()
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except RlcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
