"""Command line front end.

Subcommands: ``exact`` (linear-solve influence values), ``tree-mpa`` (exact
message passing on trees), ``mpa`` (iterative message passing on any
connected graph), ``osap`` (best placement of the unit anchor), ``gen``
(random graph files), ``compare`` (per-round error metrics against the
exact profile).  Summaries are JSON, timelines are CSV, and every number is
printed with 12 significant digits.  Exit codes: 0 success, 2 usage or
parse errors, 3 structurally invalid graphs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import exact, experiments, general_mpa, tree_mpa
from .errors import (
    DisconnectedGraphError,
    EmptyStubbornSetError,
    GraphFormatError,
    HicError,
    InvalidSpecError,
    NotATreeError,
    TooFewStubbornError,
    UnknownNodeError,
)
from .graph import dump_graph, is_tree, load_graph

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BAD_GRAPH = 3

WITH_SELF_TERM = "with-self-term"
NO_SELF_TERM = "no-self-term"


def _default_seed() -> int:
    raw = os.environ.get("HIC_SEED", "")
    try:
        return int(raw) if raw else 0
    except ValueError:
        return 0


def _round12(value):
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {k: _round12(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round12(v) for v in value]
    return value


def _emit_json(payload, output: str | None) -> None:
    text = json.dumps(_round12(payload), indent=2, sort_keys=False) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _parse_ids(raw: str) -> list[int]:
    try:
        return [int(part) for part in raw.split(",") if part != ""]
    except ValueError as exc:
        raise InvalidSpecError(f"bad id list {raw!r}") from exc


def _self_term_offset(convention: str) -> float:
    return 0.0 if convention == WITH_SELF_TERM else -1.0


def _hic_payload(hic: dict[int, float], offset: float) -> dict[str, float]:
    return {str(i): hic[i] + offset for i in sorted(hic)}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hic",
        description="Influence centrality of network nodes against zero-anchored holdouts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, stubborn_required=True):
        p.add_argument("graph", help="graph file (lines: 'n <count>', 'e <u> <v> [conductance]')")
        p.add_argument("--stubborn-zero", required=stubborn_required, default="",
                       help="comma-separated ids of zero-anchored nodes")
        p.add_argument("--output", default=None, help="write JSON here instead of stdout")
        p.add_argument("--hic-convention", choices=[WITH_SELF_TERM, NO_SELF_TERM],
                       default=WITH_SELF_TERM,
                       help="whether reported values include the source node's own unit term")

    p = sub.add_parser("exact", help="influence values from a direct linear solve")
    add_common(p)
    p.add_argument("--source", type=int, default=None,
                   help="evaluate only this node instead of all free nodes")
    p.add_argument("--residual-tol", type=float, default=exact.RESIDUAL_TOL,
                   help="max accepted solve residual (single-source mode)")

    p = sub.add_parser("tree-mpa", help="exact message passing on a tree")
    add_common(p)

    p = sub.add_parser("mpa", help="iterative message passing on any connected graph")
    add_common(p)
    p.add_argument("--tol", type=float, default=general_mpa.DEFAULT_TOL,
                   help="mean absolute estimate change that stops the run")
    p.add_argument("--max-iters", type=int, default=general_mpa.DEFAULT_MAX_ITERS)
    p.add_argument("--timeline", default=None, help="write per-round estimates CSV here")

    p = sub.add_parser("osap", help="best placement of the unit anchor")
    add_common(p)
    p.add_argument("--tol", type=float, default=general_mpa.DEFAULT_TOL)
    p.add_argument("--max-iters", type=int, default=general_mpa.DEFAULT_MAX_ITERS)

    p = sub.add_parser("compare", help="per-round error metrics against the exact profile")
    add_common(p)
    p.add_argument("--tol", type=float, default=general_mpa.DEFAULT_TOL)
    p.add_argument("--max-iters", type=int, default=general_mpa.DEFAULT_MAX_ITERS)
    p.add_argument("--csv", default=None, help="write per-round errors CSV here")

    p = sub.add_parser("gen", help="write a generated graph file")
    gen_sub = p.add_subparsers(dest="family", required=True)

    def add_gen(name, help_text):
        g = gen_sub.add_parser(name, help=help_text)
        g.add_argument("--n", type=int, required=True, help="number of nodes")
        g.add_argument("--seed", type=int, default=None,
                       help="generator seed (default: HIC_SEED env or 0)")
        g.add_argument("--output", default=None, help="write the graph file here")
        return g

    g = add_gen("er", "independent edges with a fixed probability")
    g.add_argument("--p", type=float, required=True)
    g = add_gen("ws", "rewired ring lattice")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--beta", type=float, required=True)
    add_gen("tree", "uniform random labeled tree")
    add_gen("line", "path graph")
    add_gen("star", "star graph")
    return parser


def _check_stopping(args) -> general_mpa.StoppingRule:
    try:
        return general_mpa.StoppingRule(tol=args.tol, max_iters=args.max_iters)
    except ValueError as exc:
        raise InvalidSpecError(str(exc)) from exc


def _cmd_exact(args) -> int:
    graph = load_graph(args.graph)
    zeros = _parse_ids(args.stubborn_zero)
    offset = _self_term_offset(args.hic_convention)
    if args.source is not None:
        value = exact.hic_exact(graph, zeros, args.source, residual_tol=args.residual_tol)
        _emit_json({str(args.source): value + offset}, args.output)
    else:
        result = exact.hic_all_exact(graph, zeros)
        _emit_json(_hic_payload(result.hic, offset), args.output)
    return EXIT_OK


def _cmd_tree_mpa(args) -> int:
    graph = load_graph(args.graph)
    zeros = _parse_ids(args.stubborn_zero)
    result, stats = tree_mpa.run_tree_mpa(graph, zeros)
    offset = _self_term_offset(args.hic_convention)
    payload = {
        "hic": _hic_payload(result.hic, offset),
        "argmax": result.argmax_node,
        "rounds": stats.rounds,
        "messages_sent": stats.messages_sent,
    }
    _emit_json(payload, args.output)
    return EXIT_OK


def _cmd_mpa(args) -> int:
    graph = load_graph(args.graph)
    zeros = _parse_ids(args.stubborn_zero)
    rule = _check_stopping(args)
    result, timeline = general_mpa.run_general_mpa(graph, zeros, rule)
    offset = _self_term_offset(args.hic_convention)
    payload = {
        "estimates": _hic_payload(result.hic, offset),
        "argmax": result.argmax_node,
        "rounds": result.rounds_or_solves,
        "stopping_reason": result.stopping_reason.value,
    }
    if result.stopping_reason is exact.StoppingReason.MAX_ITERS:
        payload["warning"] = "round cap reached before the estimates settled"
        print("warning: round cap reached before the estimates settled", file=sys.stderr)
    if args.timeline:
        timeline.write_csv(args.timeline)
    _emit_json(payload, args.output)
    return EXIT_OK


def _cmd_osap(args) -> int:
    graph = load_graph(args.graph)
    zeros = _parse_ids(args.stubborn_zero)
    offset = _self_term_offset(args.hic_convention)
    if is_tree(graph):
        result = tree_mpa.osap_tree(graph, zeros)
        candidates = len(result.hic)
    else:
        rule = _check_stopping(args)
        result, _ = general_mpa.run_general_mpa(graph, zeros, rule)
        candidates = len(result.hic)
    if result.argmax_node is None:
        raise EmptyStubbornSetError("no free node to place the unit anchor on")
    payload = {
        "argmax": result.argmax_node,
        "value": result.hic[result.argmax_node] + offset,
        "candidates_considered": candidates,
    }
    _emit_json(payload, args.output)
    return EXIT_OK


def _cmd_compare(args) -> int:
    graph = load_graph(args.graph)
    zeros = _parse_ids(args.stubborn_zero)
    rule = _check_stopping(args)
    report = experiments.compare_run(graph, zeros, rule)
    if args.csv:
        report.write_csv(args.csv)
    _emit_json(report.summary(), args.output)
    return EXIT_OK


def _cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    kind = {
        "er": experiments.ERDOS_RENYI,
        "ws": experiments.WATTS_STROGATZ,
        "tree": experiments.RANDOM_TREE,
        "line": experiments.LINE,
        "star": experiments.STAR,
    }[args.family]
    spec = experiments.GeneratorSpec(
        kind=kind,
        n=args.n,
        p=getattr(args, "p", None),
        k=getattr(args, "k", None),
        beta=getattr(args, "beta", None),
        seed=seed,
    )
    graph = experiments.generate(spec)
    if args.output:
        dump_graph(graph, args.output)
        print(f"nodes={graph.node_count} edges={graph.edge_count}")
    else:
        dump_graph(graph, sys.stdout)
        print(f"nodes={graph.node_count} edges={graph.edge_count}", file=sys.stderr)
    return EXIT_OK


_DISPATCH = {
    "exact": _cmd_exact,
    "tree-mpa": _cmd_tree_mpa,
    "mpa": _cmd_mpa,
    "osap": _cmd_osap,
    "compare": _cmd_compare,
    "gen": _cmd_gen,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except (GraphFormatError, InvalidSpecError, UnknownNodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DisconnectedGraphError, NotATreeError, EmptyStubbornSetError,
            TooFewStubbornError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_GRAPH
    except HicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_GRAPH


if __name__ == "__main__":
    sys.exit(main())
