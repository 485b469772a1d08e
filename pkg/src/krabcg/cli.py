"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 parse or semantic error, 3 skip
detected, 4 no entry point, 5 the two builders disagree.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import classic, krab
from .bench import SHAPES, run_bench
from .callgraph import (
    connected_components,
    export_dot,
    graph_diff,
    graph_to_dict,
    graphs_equal,
    unreachable_methods,
)
from .costmodel import DEFAULT_SIZES, format_csv, table1
from .errors import MiniJError, NoEntryPointError, SkipFault
from .frontend import MethodId, apply_edit, parse_patch, parse_program
from .hierarchy import build_hierarchy

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_SKIP = 3
EXIT_NO_ENTRY = 4
EXIT_DISAGREE = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="krabcg", description="Call graph construction for MiniJ programs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_opts(sp):
        sp.add_argument("file")
        sp.add_argument("--algo", choices=("krab", "classic"), default="krab")
        sp.add_argument("--rta", action="store_true", help="prune dispatch by live types (classic only)")
        sp.add_argument("--format", choices=("dot", "json"), default="dot")
        sp.add_argument("--entry", type=_method_id, help="root method as Class.method")

    graph_opts(sub.add_parser("analyze", help="build and print a call graph"))
    inc = sub.add_parser("incremental", help="apply a method patch and update the graph")
    graph_opts(inc)
    inc.add_argument("--edit", required=True, metavar="PATCHFILE")

    m = sub.add_parser("model", help="print the closed-form cost table as CSV")
    m.add_argument("--sizes", type=_count, nargs="*", default=list(DEFAULT_SIZES))

    b = sub.add_parser("bench", help="measure traversal counters on synthetic programs")
    b.add_argument("--shapes", nargs="*", choices=SHAPES, default=list(SHAPES))
    b.add_argument("--sizes", type=_count, nargs="*", default=list(DEFAULT_SIZES))
    b.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("check", help="run both builders and compare their graphs")
    c.add_argument("file")
    return p


def _method_id(text):
    try:
        return MethodId.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _count(text):
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError(f"size must be non-negative: {text}")
    return n


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _build(model, args):
    """Run the selected builder. Returns ``(graph, counters dict)``."""
    if args.algo == "classic":
        entries = [args.entry] if args.entry else None
        if args.entry and not model.has_method(args.entry):
            raise NoEntryPointError(f"entry method {args.entry} does not exist")
        g, counters = classic.classic_build(model, args.rta, entries)
        counts = _classic_counts(counters)
        if args.rta:
            counts["pruned"] = _pruned(counters.pruned)
        return g, counts
    h = build_hierarchy(model)
    if args.entry is not None:
        g, st = krab.krab_build(model, h, args.entry)
        states = [st]
    else:
        g, states = krab.krab_multi_entry(model, h)
    return g, _krab_counts(states)


def _classic_counts(c) -> dict:
    return {
        "methods_processed": c.methods_processed,
        "resolutions": c.resolutions,
        "reenqueues": c.reenqueues,
    }


def _pruned(pruned) -> list:
    """Sites whose live-type targets differ from the CHA targets."""
    return [
        {
            "caller": str(mid),
            "site": idx,
            "cha": [str(t) for t in full],
            "live": [str(t) for t in kept],
        }
        for (mid, idx), (full, kept) in sorted(pruned.items())
    ]


def _krab_counts(states) -> dict:
    return {
        "steps": sum(s.steps for s in states),
        "weighted_steps": sum(s.weighted_steps for s in states),
        "pushes": sum(s.pushes for s in states),
    }


def _emit_graph(g, model, fmt, out, extra=None) -> None:
    unreachable = sorted(unreachable_methods(model, g))
    comps = connected_components(g)
    if fmt == "json":
        data = graph_to_dict(g)
        data["unreachable"] = [str(m) for m in unreachable]
        data["components"] = [[str(m) for m in c] for c in comps]
        if extra:
            data.update(extra)
        out.write(json.dumps(data, indent=2) + "\n")
        return
    out.write(export_dot(g))
    out.write("// unreachable: " + ", ".join(str(m) for m in unreachable) + "\n")
    for i, c in enumerate(comps, 1):
        out.write(f"// component {i}: " + ", ".join(str(m) for m in c) + "\n")
    for label, counts in (extra or {}).items():
        out.write(f"// {label}: " + " ".join(f"{k}={v}" for k, v in counts.items()) + "\n")


def _cmd_analyze(args, out) -> int:
    model = parse_program(_read(args.file))
    g, counts = _build(model, args)
    pruned = counts.get("pruned")
    if pruned is None:
        _emit_graph(g, model, args.format, out)
    elif args.format == "json":
        _emit_graph(g, model, "json", out, {"pruned": pruned})
    else:
        _emit_graph(g, model, "dot", out)
        for p in pruned:
            out.write(f"// pruned {p['caller']}#{p['site']}: cha={','.join(p['cha'])}"
                      f" live={','.join(p['live'])}\n")
    return EXIT_OK


def _cmd_incremental(args, out) -> int:
    model = parse_program(_read(args.file))
    delta = parse_patch(_read(args.edit))
    prior, _ = _build(model, args)
    edited = apply_edit(model, delta)
    if args.algo == "classic":
        g, c = classic.classic_incremental(edited, prior, delta.method)
        inc_counts = _classic_counts(c)
    else:
        g, st = krab.krab_incremental(
            edited, build_hierarchy(edited), prior, delta.method, args.entry
        )
        inc_counts = _krab_counts([st])
    full, full_counts = _build(edited, args)
    if not graphs_equal(g, full):
        for line in graph_diff(full, g):
            print(line, file=sys.stderr)
        print("incremental result differs from full rebuild", file=sys.stderr)
        return EXIT_DISAGREE
    _emit_graph(g, edited, args.format, out, {"incremental": inc_counts, "rebuild": full_counts})
    return EXIT_OK


def _cmd_model(args, out) -> int:
    out.write(format_csv(table1(args.sizes)))
    return EXIT_OK


def _cmd_bench(args, out) -> int:
    for n in args.sizes:
        if n < 1:
            raise UsageError(f"bench sizes must be >= 1, got {n}")
    out.write(run_bench(args.shapes, args.sizes, args.seed).to_csv())
    return EXIT_OK


def _cmd_check(args, out) -> int:
    model = parse_program(_read(args.file))
    g_classic, _ = classic.classic_build(model)
    g_krab, _ = krab.krab_multi_entry(model, build_hierarchy(model))
    if graphs_equal(g_classic, g_krab):
        out.write("graphs equivalent\n")
        return EXIT_OK
    out.write("graphs differ\n")
    for line in graph_diff(g_classic, g_krab):
        out.write(line + "\n")
    return EXIT_DISAGREE


_COMMANDS = {
    "analyze": _cmd_analyze,
    "incremental": _cmd_incremental,
    "model": _cmd_model,
    "bench": _cmd_bench,
    "check": _cmd_check,
}


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = _build_parser().parse_args(argv)
        return _COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SkipFault as exc:
        print(f"skip detected: {exc}", file=sys.stderr)
        return EXIT_SKIP
    except NoEntryPointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_ENTRY
    except MiniJError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
