"""Command-line entry point: ``autl {verify,census,aut}``.

Exit codes: 0 success, 1 some checker failed (census), 2 unreadable or
invalid input, 3 enumeration cap or timeout hit.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional

from . import report as rpt
from .abelian import abelian_invariants
from .cache import AutCache
from .config import REPORT_FORMATS, RunConfig
from .constructions import builtin, builtin_corpus
from .core import Group
from .errors import EnumerationCapExceeded, InvalidParameter, SearchTimeout
from .groupfile import GroupFileError, load_corpus_dir, load_groups
from .theorems import GroupData, analyse, census

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3

log = logging.getLogger("autl")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-order", type=int, default=243)
    p.add_argument("--timeout", type=float, default=30.0, help="seconds per group")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--format", choices=REPORT_FORMATS, default="json")
    p.add_argument("--aut-cap", type=int, default=1 << 20)
    p.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")


def _source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", metavar="NAME")
    src.add_argument("--file", metavar="PATH")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="autl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run every checker on one group")
    _source(v)
    _common(v)

    a = sub.add_parser("aut", help="dump automorphism subgroup orders and invariants")
    _source(a)
    _common(a)

    c = sub.add_parser("census", help="run every checker over a corpus")
    src = c.add_mutually_exclusive_group()
    src.add_argument("--builtin", action="store_true", help="builtin corpus (default)")
    src.add_argument("--corpus-dir", metavar="DIR")
    _common(c)
    return parser


def _config(args) -> RunConfig:
    return RunConfig(
        max_order=args.max_order,
        aut_enumeration_cap=args.aut_cap,
        per_group_timeout_seconds=args.timeout,
        parallelism_degree=args.jobs,
        cache_dir=args.cache_dir,
        report_format=args.format,
    )


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _load_single(args) -> Group:
    if args.builtin:
        G = builtin(args.builtin)
    else:
        groups = load_groups(args.file, max_order=args.max_order)
        if len(groups) != 1:
            raise GroupFileError(f"{args.file}: expected exactly one group, found {len(groups)}")
        G = groups[0]
    if G.order > args.max_order:
        raise GroupFileError(f"{G.label}: order {G.order} exceeds --max-order {args.max_order}")
    return G



def cmd_verify(args) -> int:
    cfg = _config(args)
    G = _load_single(args)
    r = analyse(G, cfg, AutCache(cfg.cache_dir))
    _emit(rpt.render(cfg.report_format, [r]), args.output)
    if r.error:
        print(f"error: {r.error}", file=sys.stderr)
        return EXIT_LIMIT
    return EXIT_FAIL if r.has_failure else EXIT_OK


def aut_summary(d: GroupData) -> dict:
    return {
        "group": d.G.label,
        "order": d.G.order,
        "aut_order": d.aut.order,
        "inn_order": d.inn.order,
        "autc_order": d.autc.order,
        "autl_order": d.autl.order,
        "autLZ_order": d.autLZ.order,
        "order_L": d.L.order,
        "order_Z": d.Z.order,
        "order_Gprime": d.derived.order,
        "inv_L": d.inv_L.as_list(),
        "inv_Z": abelian_invariants(d.Z).as_list(),
        "inv_Gprime": abelian_invariants(d.derived).as_list() if d.derived.is_abelian else None,
        "inv_autl": abelian_invariants(d.autl).as_list(),
        "inv_autLZ": abelian_invariants(d.autLZ).as_list(),
    }


def _render_mapping(fmt: str, data: dict) -> str:
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    if fmt == "csv":
        return "key,value\n" + "".join(f"{k},{rpt._cell(v)}\n" for k, v in data.items())
    return "| key | value |\n|---|---|\n" + "".join(f"| {k} | {rpt._cell(v)} |\n" for k, v in data.items())


def cmd_aut(args) -> int:
    cfg = _config(args)
    G = _load_single(args)
    d = GroupData(G, cfg, AutCache(cfg.cache_dir))
    try:
        data = aut_summary(d)
    except (EnumerationCapExceeded, SearchTimeout) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    _emit(_render_mapping(cfg.report_format, data), args.output)
    return EXIT_OK


def cmd_census(args) -> int:
    cfg = _config(args)
    skipped = []
    if args.corpus_dir:
        groups, skipped = load_corpus_dir(args.corpus_dir, max_order=cfg.max_order)
        for s in skipped:
            print(f"skipped {s.source}: {s.reason}", file=sys.stderr)
    else:
        groups = builtin_corpus(min(cfg.max_order, 2048))
    result = census(groups, cfg)
    _emit(rpt.render(cfg.report_format, result.reports, result.summary, skipped), args.output)
    for e in result.summary.errors:
        print(f"error: {e}", file=sys.stderr)
    return EXIT_FAIL if result.summary.total_fails else EXIT_OK


COMMANDS = {"verify": cmd_verify, "aut": cmd_aut, "census": cmd_census}


def main(argv: Optional[list[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (GroupFileError, InvalidParameter, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (EnumerationCapExceeded, SearchTimeout) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
