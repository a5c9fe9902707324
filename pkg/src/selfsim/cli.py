"""Command-line interface: ``selfsim analyze | automaton | verify | catalog``.

Exit codes: 0 success, 1 failed verification rows, 2 input error, 3
precondition violation (including an exhausted time budget), 4 IO error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import ENGINE_VERSION
from .constructions import CATALOG_NAMES, builtin, load, parse_group_file
from .endo import DecisionReport, cpu_workers, decide_self_similar
from .errors import (
    BudgetExceeded,
    ClosureCapExceeded,
    EnumerationCapExceeded,
    NotABijection,
    NotAPGroup,
    NotSelfSimilar,
    OrderMismatch,
    ParseError,
    SelfSimError,
)
from .group import Group, log_p, lower_central_series
from .pgroups import is_maximal_class, is_powerful, minimal_generator_count, rank
from .tree import faithful_depth, is_level_transitive, to_document, wreath_recursion
from .verify import SUITES, run_suite

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_IO = 0, 2, 3, 4

INPUT_ERRORS = (ParseError, NotAPGroup, NotABijection, OrderMismatch, ClosureCapExceeded)

RECORD_FIELDS = (
    "name", "order", "p", "d", "rank", "class", "coclass", "is_powerful",
    "is_maximal_class", "self_similar", "witness", "search_stats", "timings",
    "engine_version",
)


class InputError(Exception):
    """Bad command-line input that is not a group-theoretic error (unknown builtin...)."""


def resolve_group(args: argparse.Namespace) -> Group:
    if args.builtin is not None:
        try:
            return builtin(args.builtin)
        except KeyError as exc:
            raise InputError(exc.args[0]) from None
    text = Path(args.file).read_text()
    return load(parse_group_file(text))


def structure(G: Group) -> dict:
    """The structural part of a record (everything before the decision)."""
    if G.order == 1:
        return {"p": None, "d": 0, "rank": 0, "class": 0, "coclass": 0,
                "is_powerful": True, "is_maximal_class": False}
    if G.prime is None:
        raise NotAPGroup(f"{G.name} of order {G.order} is not a p-group")
    p = G.prime
    n = log_p(G.order, p)
    cls = lower_central_series(G).nilpotency_class
    try:
        r: object = rank(G)
    except EnumerationCapExceeded:
        r = "capped"
    return {
        "p": p,
        "d": minimal_generator_count(G),
        "rank": r,
        "class": cls,
        "coclass": n - cls,
        "is_powerful": is_powerful(G),
        # order p has class 1 = n, so it is not of maximal class
        "is_maximal_class": n >= 2 and is_maximal_class(G),
    }


def witness_summary(report: DecisionReport) -> Optional[dict]:
    ve = report.witness
    if ve is None:
        return None
    H = ve.domain
    return {
        "subgroup_order": H.order,
        "generators": list(H.generators),
        "images": [ve.hom(x) for x in H.generators],
    }


def analysis_record(
    G: Group, workers: int = 1, budget_secs: Optional[float] = None, timings: bool = True
) -> dict:
    """Build an AnalysisRecord.  Raises BudgetExceeded with the partial record attached."""
    start = time.perf_counter()
    record = {"name": G.name, "order": G.order}
    record.update(structure(G))
    t_struct = time.perf_counter() - start
    try:
        report = decide_self_similar(G, workers=workers, budget_secs=budget_secs)
    except BudgetExceeded as exc:
        stats = exc.stats.as_dict() if exc.stats is not None else {}
        stats["partial"] = True
        record.update(self_similar=None, witness=None, search_stats=stats)
        record["timings"] = _timings(timings, t_struct, time.perf_counter() - start - t_struct)
        record["engine_version"] = ENGINE_VERSION
        exc.record = _ordered(record)
        raise
    record["self_similar"] = report.self_similar
    record["witness"] = witness_summary(report)
    record["search_stats"] = report.stats.as_dict()
    record["timings"] = _timings(timings, t_struct, report.elapsed)
    record["engine_version"] = ENGINE_VERSION
    return _ordered(record)


def _timings(enabled: bool, structure_secs: float, decide_secs: float) -> Optional[dict]:
    if not enabled:
        return None
    return {"structure_secs": round(structure_secs, 6), "decide_secs": round(decide_secs, 6)}


def _ordered(record: dict) -> dict:
    return {k: record[k] for k in RECORD_FIELDS}


def dump_record(record: dict) -> str:
    return json.dumps(record, separators=(", ", ": "))


def append_lines(path: str, lines: Sequence[str]) -> None:
    if not lines:
        return
    with open(path, "a", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")


def existing_keys(path: str) -> set[tuple[str, str]]:
    p = Path(path)
    if not p.exists():
        return set()
    keys = set()
    with p.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                keys.add((rec["engine_version"], rec["name"]))
            except (json.JSONDecodeError, KeyError, TypeError):
                raise OSError(f"{path}:{lineno}: not a record line") from None
    return keys


# --- commands ---------------------------------------------------------------


def cmd_analyze(args: argparse.Namespace) -> int:
    G = resolve_group(args)
    try:
        record = analysis_record(G, args.workers, args.budget_secs, not args.no_timings)
    except BudgetExceeded as exc:
        print(dump_record(exc.record))
        print(f"error: {exc} (partial search)", file=sys.stderr)
        return EXIT_PRECONDITION
    line = dump_record(record)
    print(line)
    if args.out:
        append_lines(args.out, [line])
    return EXIT_OK


def cmd_automaton(args: argparse.Namespace) -> int:
    G = resolve_group(args)
    report = decide_self_similar(G, workers=args.workers, budget_secs=args.budget_secs)
    if not report.self_similar or report.witness is None:
        raise NotSelfSimilar(f"{G.name} admits no simple virtual endomorphism from a maximal subgroup")
    a = wreath_recursion(G, report.witness)
    doc = to_document(a)
    summary = {
        "group": G.name,
        "states": a.size,
        "alphabet_size": a.alphabet_size,
        "faithful_depth": faithful_depth(a),
        "level_transitive": {str(k): is_level_transitive(a, k) for k in range(1, args.depth + 1)},
    }
    if args.out:
        Path(args.out).write_text(doc, encoding="utf-8")
    else:
        sys.stdout.write(doc)
    print(json.dumps(summary))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    failed = 0
    total = 0

    def show(row):
        nonlocal failed, total
        total += 1
        failed += not row.passed
        print(row.line(), flush=True)

    run_suite(args.suite, show)
    print(f"{total} rows, {failed} failed")
    return EXIT_OK if failed == 0 else 1


def cmd_catalog(args: argparse.Namespace) -> int:
    have = existing_keys(args.out)
    added = 0
    for name in CATALOG_NAMES:
        if (ENGINE_VERSION, name) in have:
            continue
        record = analysis_record(builtin(name), args.workers, args.budget_secs, not args.no_timings)
        append_lines(args.out, [dump_record(record)])
        added += 1
    print(f"{added} new records, {len(CATALOG_NAMES) - added} already present in {args.out}")
    return EXIT_OK


# --- argument parsing ---------------------------------------------------------


def _add_group_source(sp: argparse.ArgumentParser) -> None:
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", metavar="NAME", help="a built-in group, e.g. D8 or wreath3")
    src.add_argument("--file", metavar="PATH", help="a group file (see docs/formats.md)")


def _add_search_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--workers", type=int, default=cpu_workers(),
                    help="search processes (default: available cores)")
    sp.add_argument("--budget-secs", type=float, default=None,
                    help="abort the decision after this many seconds (exit 3)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="selfsim", description="Decide self-similarity of finite p-groups and build their tree actions."
    )
    parser.add_argument("--version", action="version", version=ENGINE_VERSION)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("analyze", help="structural report and self-similarity decision")
    _add_group_source(sp)
    _add_search_flags(sp)
    sp.add_argument("--out", help="append the record to this file")
    sp.add_argument("--no-timings", action="store_true",
                    help="write null timings so reruns are byte-identical")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("automaton", help="automaton of the first simple witness")
    _add_group_source(sp)
    _add_search_flags(sp)
    sp.add_argument("--depth", type=int, default=3, help="levels in the transitivity table")
    sp.add_argument("--out", help="write the document here instead of stdout")
    sp.set_defaults(func=cmd_automaton)

    sp = sub.add_parser("verify", help="run verification suites over the catalog")
    sp.add_argument("--suite", default="all", choices=["all", *SUITES])
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("catalog", help="append one record per catalog group")
    sp.add_argument("--out", required=True)
    _add_search_flags(sp)
    sp.add_argument("--no-timings", action="store_true")
    sp.set_defaults(func=cmd_catalog)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be at least 1")
    if getattr(args, "depth", 0) < 0:
        parser.error("--depth must be non-negative")
    try:
        return args.func(args)
    except (InputError, *INPUT_ERRORS) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SelfSimError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
