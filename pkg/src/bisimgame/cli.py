"""Command-line front end: batch analysis of CSV system files.

Exit codes: 0 success (for `check`: bisimilar), 1 `check` verdict
"not bisimilar", 2 any error.
"""
from __future__ import annotations

import argparse
import sys

from .coalgebra import CoalgebraError, observe
from .csvio import load
from .logic import distinguishing_formula, recode_for
from .refine import INF, refine


def _analyze(path):
    c = load(path)
    part, st = refine(c)
    return c, part, st


def cmd_partition(args) -> int:
    _, part, _ = _analyze(args.file)
    for b in part.blocks:
        print("{" + ",".join(sorted(b)) + "}")
    return 0


def cmd_check(args) -> int:
    c, part, st = _analyze(args.file)
    for x in (args.x0, args.x1):
        if x not in c.transitions:
            raise CoalgebraError(f"unknown state {x!r}")
    i = st.index(args.x0, args.x1)
    if i == INF:
        print(f"bisimilar: {args.x0} ~ {args.x1}")
        return 0
    s, blk = st.move(args.x0, args.x1)
    print(f"not bisimilar, I={int(i)}, T=({s}, {{{','.join(sorted(blk))}}})")
    return 1


def cmd_formula(args) -> int:
    c, part, st = _analyze(args.file)
    for x in (args.x0, args.x1):
        if x not in c.transitions:
            raise CoalgebraError(f"unknown state {x!r}")
    phi = distinguishing_formula(c, part, st, (args.x0, args.x1))
    if args.recode:
        if args.recode == "box-dia" and c.kind != "lts":
            raise CoalgebraError("box-dia recoding applies to lts systems")
        if args.recode == "thresholds" and c.kind != "pts":
            raise CoalgebraError("thresholds recoding applies to pts systems")
        phi = recode_for(c, phi)
    print(phi)
    return 0


def cmd_strategy(args) -> int:
    c, part, st = _analyze(args.file)
    for bi, x0 in enumerate(c.states):
        for x1 in c.states[bi + 1:]:
            i = st.index(x0, x1)
            if i == INF:
                print(f"({x0},{x1}): bisimilar")
            else:
                s, blk = st.move(x0, x1)
                print(f"({x0},{x1}): I={int(i)} "
                      f"T=({s}, {{{','.join(sorted(blk))}}})")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bisimgame",
        description="Behavioural equivalence, bisimulation games and "
                    "distinguishing formulas for finite transition systems")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", help="print the coarsest bisimulation partition")
    p.add_argument("file")
    p.set_defaults(fn=cmd_partition)

    p = sub.add_parser("check", help="decide bisimilarity of two states")
    p.add_argument("file")
    p.add_argument("x0")
    p.add_argument("x1")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("formula", help="print a distinguishing formula")
    p.add_argument("file")
    p.add_argument("x0")
    p.add_argument("x1")
    p.add_argument("--recode", choices=["box-dia", "thresholds"])
    p.set_defaults(fn=cmd_formula)

    p = sub.add_parser("strategy", help="print the full (I, T) strategy table")
    p.add_argument("file")
    p.set_defaults(fn=cmd_strategy)

    p = sub.add_parser("serve", help="run the HTTP game service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (CoalgebraError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
