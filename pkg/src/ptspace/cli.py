"""Command-line interface.

Subcommands: ``parse`` (validate and echo the canonical form), ``invert``,
``lang`` (bounded trace enumeration), ``search`` (ud/bd/bdp shortest run),
``gen`` (seeded corpus generation), ``bench`` (CSV benchmark over a
corpus). Exit codes: 0 success, 1 domain error, 2 usage error.

Search output contains no wall times, so ``parse``, ``invert``, ``lang``,
``gen``, and ``search --strategy ud|bd`` are byte-deterministic for fixed
inputs and seeds.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import bench as bench_mod
from . import generator as gen_mod
from .language import LoopBound, enumerate_language, trace_text
from .search import SearchLimitExceeded, search
from .statespace import format_run
from .tree import (
    InvalidTreeError,
    ParseError,
    ProcessTree,
    format_tree,
    invert,
    load_ptt,
    parse_tree,
)


class _DomainError(Exception):
    pass


def _input_trees(args) -> list[ProcessTree]:
    if args.file is not None:
        return load_ptt(args.file)
    if args.tree is None:
        raise _DomainError("provide a TREE argument or --file")
    return [parse_tree(args.tree)]


def _cmd_parse(args) -> None:
    for tree in _input_trees(args):
        print(format_tree(tree))


def _cmd_invert(args) -> None:
    for tree in _input_trees(args):
        print(format_tree(invert(tree)))


def _cmd_lang(args) -> None:
    for tree in _input_trees(args):
        traces = enumerate_language(
            tree, LoopBound(args.bound), max_traces=args.max_traces
        )
        for trace in sorted(traces, key=lambda t: (len(t), t)):
            print(trace_text(trace))


def _cmd_search(args) -> None:
    for tree in _input_trees(args):
        outcome = search(
            tree, args.strategy, state_cap=args.state_cap, timeout=args.timeout
        )
        print(format_run(outcome.run))
        print(f"length: {outcome.run_length}")
        print(f"expanded: {outcome.expanded_states}")


def _gen_config(args) -> gen_mod.GenConfig:
    values = bench_mod.load_config(args.config) if args.config else {}
    for key in ("seed", "count", "min_act", "max_act"):
        flag = getattr(args, key, None)
        if flag is not None:
            values[
                {"min_act": "min_activities", "max_act": "max_activities"}.get(key, key)
            ] = flag
    count = values.pop("count", 10)
    values.pop("state_cap", None)
    values.pop("timeout", None)
    values.pop("repetitions", None)
    args.count = count
    return gen_mod.GenConfig(**values)


def _cmd_gen(args) -> None:
    config = _gen_config(args)
    entries = gen_mod.generate_corpus(config, args.count)
    if args.out:
        gen_mod.save_corpus(entries, args.out, config)
    else:
        gen_mod.write_corpus(entries, sys.stdout, config)


def _cmd_bench(args) -> None:
    values = bench_mod.load_config(args.config) if args.config else {}
    state_cap = args.state_cap if args.state_cap is not None else values.get(
        "state_cap", bench_mod.BenchOptions.state_cap
    )
    timeout = args.timeout if args.timeout is not None else values.get("timeout", 30.0)
    repetitions = (
        args.reps if args.reps is not None else values.get("repetitions", 3)
    )
    options = bench_mod.BenchOptions(
        state_cap=state_cap, timeout=timeout, repetitions=repetitions, jobs=args.jobs
    )
    entries = gen_mod.load_corpus(args.corpus)
    result = bench_mod.run_benchmark(entries, options)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fp:
            bench_mod.write_csv(result.records, fp)
    else:
        bench_mod.write_csv(result.records, sys.stdout)
    if result.skipped:
        print(f"skipped {len(result.skipped)} tree(s):", file=sys.stderr)
        for skip in result.skipped:
            print(f"  {skip.tree_id}: {skip.reason}", file=sys.stderr)
    if args.summary and result.records:
        print(
            bench_mod.format_summary(bench_mod.aggregate(result.records)),
            file=sys.stderr,
        )


def _add_tree_input(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("tree", nargs="?", help="tree in short-hand notation")
    parser.add_argument("--file", help=".ptt file, one tree per line")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptspace",
        description="Process-tree state space: parsing, inversion, languages, "
        "shortest-run search, and benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="validate and echo the canonical form")
    _add_tree_input(p)
    p.set_defaults(fn=_cmd_parse)

    p = sub.add_parser("invert", help="print the inverse tree")
    _add_tree_input(p)
    p.set_defaults(fn=_cmd_invert)

    p = sub.add_parser("lang", help="enumerate the bounded trace language")
    _add_tree_input(p)
    p.add_argument("--bound", type=int, default=2, help="max redos per loop activation")
    p.add_argument("--max-traces", type=int, default=10**6)
    p.set_defaults(fn=_cmd_lang)

    p = sub.add_parser("search", help="shortest run from all-Future to all-Closed")
    _add_tree_input(p)
    p.add_argument("--strategy", choices=("ud", "bd", "bdp"), default="ud")
    p.add_argument("--state-cap", type=int, default=10**6)
    p.add_argument("--timeout", type=float, default=None, help="seconds")
    p.set_defaults(fn=_cmd_search)

    p = sub.add_parser("gen", help="generate a seeded random corpus (.ptt)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--min-act", type=int, default=None, help="min activities per tree")
    p.add_argument("--max-act", type=int, default=None, help="max activities per tree")
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("bench", help="run ud/bd/bdp over a corpus, emit CSV")
    p.add_argument("--corpus", required=True, help=".ptt corpus file")
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.add_argument("--state-cap", type=int, default=None)
    p.add_argument("--timeout", type=float, default=None, help="seconds per search")
    p.add_argument("--reps", type=int, default=None, help="timing repetitions")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for ud/bd")
    p.add_argument("--summary", action="store_true", help="print aggregates to stderr")
    p.set_defaults(fn=_cmd_bench)

    return parser


def _escape_tree_args(argv: list[str]) -> list[str]:
    """Insert ``--`` before a leading-``-`` tree argument so that sequence
    trees like ``->(a,b)`` parse as positionals. Options go before the tree."""
    for i, arg in enumerate(argv):
        if arg == "--":
            break
        if arg.startswith("->(") or arg.startswith("<-("):
            return argv[:i] + ["--"] + argv[i:]
    return argv


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_escape_tree_args(list(sys.argv[1:] if argv is None else argv)))
    try:
        args.fn(args)
    except (
        ParseError,
        InvalidTreeError,
        SearchLimitExceeded,
        _DomainError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
