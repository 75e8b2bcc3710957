"""Command line interface.

Exit status: 0 ok, 1 inconsistent knowledge, 2 unreadable or invalid input,
3 budget exhausted, 4 failed invariant (including ``check`` verdicts).
Errors are reported on stderr as one ``error: <kind>: <message>`` line.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench
from .bnb import search_bnb
from .classbuild import dag_to_cpdag, dag_to_mag, latent_project, mag_to_pag
from .exceptions import CausalPathsError, GraphClassError, InputError, InvariantError, ResourceError
from .formats import parse_graph, parse_knowledge, serialize_graph, to_dot
from .graph import GraphClass, MixedGraph, has_almost_directed_cycle, has_directed_cycle
from .incorporate import SearchOptions, SearchStats, find_pc_graph

EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_INVARIANT = 4


class _Inconsistent(CausalPathsError):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load(args):
    gf = parse_graph(_read(args.graph))
    k = list(gf.knowledge)
    if getattr(args, "knowledge", None):
        k += parse_knowledge(_read(args.knowledge))
    if args.mode is not None and gf.graph.kind.value != args.mode:
        raise GraphClassError(f"graph is a {gf.graph.kind.value.upper()} but --mode is {args.mode}")
    return gf.graph, k


def _options(args) -> SearchOptions:
    return SearchOptions(pruning=not args.no_prune, mode=None, node_budget=args.budget)


def _reference(args, p: MixedGraph):
    if not getattr(args, "reference", None):
        return None
    ref = parse_graph(_read(args.reference)).graph
    if ref.kind != GraphClass.MAG:
        raise GraphClassError("--reference must be a MAG")
    return ref


def _emit_pc(args, p, k_constraints, out) -> int:
    stats = SearchStats()
    sat, pc = find_pc_graph(p, k_constraints, _options(args), reference=_reference(args, p), stats=stats)
    if not sat:
        raise _Inconsistent("knowledge is inconsistent with the graph: no class member satisfies it")
    inferred, u = bench.count_inferences(p, pc)
    out.write(serialize_graph(pc))
    rate = inferred / u if u else 0.0
    out.write(f"# uncertainties {u}\n# inferences {inferred}\n# inference_rate {rate:.6g}\n"
              f"# nodes_visited {stats.nodes_visited}\n")
    if args.dot:
        Path(args.dot).write_text(to_dot(pc))
    return EXIT_OK


def cmd_incorporate(args, out) -> int:
    p, k = _load(args)
    return _emit_pc(args, p, [w.constraint for w in k], out)


def cmd_select(args, out) -> int:
    p, k = _load(args)
    res = search_bnb(p, k, _options(args), reference=_reference(args, p))
    if res.best_score == float("-inf"):
        raise _Inconsistent("graph has no valid class member")
    out.write(f"# score {res.best_score:.6g}\n")
    for i, w in enumerate(k):
        tag = "selected" if i in res.best_subset else "dropped"
        out.write(f"# {tag} {w}\n")
    return _emit_pc(args, p, res.selected(k), out)


def cmd_convert(args, out) -> int:
    g = parse_graph(_read(args.graph)).graph
    hide = [v for v in (args.hide or "").split(",") if v]
    if g.kind == GraphClass.DAG and args.to == "cpdag" and not hide:
        res = dag_to_cpdag(g)
    elif g.kind == GraphClass.DAG and args.to == "mag":
        res = latent_project(g, hide) if hide else dag_to_mag(g)
    elif g.kind == GraphClass.DAG and args.to == "pag":
        res = mag_to_pag(latent_project(g, hide), args.max_positions)
    elif g.kind == GraphClass.MAG and args.to == "pag" and not hide:
        res = mag_to_pag(g, args.max_positions)
    else:
        extra = " with --hide" if hide else ""
        raise InputError(f"unsupported conversion {g.kind.value} -> {args.to}{extra}")
    out.write(serialize_graph(res))
    return EXIT_OK


def _bench_grid(cfg: dict) -> tuple:
    try:
        grid = [bench.GenConfig(**row) for row in cfg["grid"]]
        replicates = int(cfg.get("replicates", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad bench config: {exc}") from None
    return grid, replicates


def cmd_bench(args, out) -> int:
    try:
        cfg = json.loads(_read(args.config))
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno}: {exc.msg}") from None
    grid, replicates = _bench_grid(cfg)
    records = bench.run_experiment(grid, replicates, args.seed)
    text = bench.write_csv(records)
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_check(args, out) -> int:
    gf = parse_graph(_read(args.graph), validate=False)
    g = gf.graph
    problems = []
    try:
        g.validate()
    except GraphClassError as exc:
        problems.append(str(exc))
    if g.kind in (GraphClass.DAG, GraphClass.MAG):
        if has_directed_cycle(g) and not any("directed cycle" in p for p in problems):
            problems.append("directed cycle")
    if g.kind == GraphClass.MAG and not problems and has_almost_directed_cycle(g):
        problems.append("almost directed cycle")
    if problems:
        for msg in problems:
            out.write(f"invalid: {msg}\n")
        return EXIT_INVARIANT
    out.write(f"ok: valid {g.kind.value.upper()} with {g.n} vertices and {g.num_edges()} edges\n")
    return EXIT_OK


def _search_flags(sp):
    sp.add_argument("--mode", choices=("pdag", "pag"), help="expected graph class")
    sp.add_argument("--no-prune", action="store_true", help="disable the prune rule")
    sp.add_argument("--budget", type=int, default=None, help="maximum search nodes")
    sp.add_argument("--dot", help="also write the result as Graphviz DOT to this file")
    sp.add_argument("--reference", help="MAG file whose separations define the class (PAG mode)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="causalpaths",
                                 description="Add causal path knowledge to PDAGs and PAGs.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("incorporate", help="orient a PDAG/PAG using path constraints")
    sp.add_argument("graph")
    sp.add_argument("knowledge", nargs="?", help="knowledge file (added to the graph file's own)")
    _search_flags(sp)
    sp.set_defaults(func=cmd_incorporate)

    sp = sub.add_parser("select", help="pick a best consistent subset of weighted knowledge")
    sp.add_argument("graph")
    sp.add_argument("knowledge", nargs="?")
    _search_flags(sp)
    sp.set_defaults(func=cmd_select)

    sp = sub.add_parser("convert", help="DAG to CPDAG/MAG/PAG, MAG to PAG")
    sp.add_argument("graph")
    sp.add_argument("--to", required=True, choices=("cpdag", "mag", "pag"))
    sp.add_argument("--hide", help="comma-separated hidden vertices (DAG input)")
    sp.add_argument("--max-positions", type=int, default=20,
                    help="cap on undetermined marks when building a PAG")
    sp.set_defaults(func=cmd_convert)

    sp = sub.add_parser("bench", help="run a random-graph experiment grid, write CSV")
    sp.add_argument("config", help="JSON file: {\"replicates\": R, \"grid\": [GenConfig fields...]}")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out", help="CSV path (default: stdout)")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("check", help="validate a graph file against its class")
    sp.add_argument("graph")
    sp.set_defaults(func=cmd_check)
    return ap


_EXIT_FOR = (
    (_Inconsistent, EXIT_INCONSISTENT, "inconsistent"),
    (InputError, EXIT_INPUT, "input"),
    (ResourceError, EXIT_RESOURCE, "resource"),
    (InvariantError, EXIT_INVARIANT, "invariant"),
)


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except CausalPathsError as exc:
        for cls, code, kind in _EXIT_FOR:
            if isinstance(exc, cls):
                err.write(f"error: {kind}: {exc}\n")
                return code
        raise


if __name__ == "__main__":
    sys.exit(main())
