#!/usr/bin/env python3
"""Exhaustive cumulativity grid for the list family: for every pair of
levels i, j <= MAX the instances are mutual subtypes and judgementally
equal, parameters excluded from the comparison.

Usage: python scripts/cumulative_lists_grid.py [--max-level 4]
"""

from __future__ import annotations

import argparse
import sys

from pcuic.conversion import conv
from pcuic.cli import process_source
from pcuic.cumulativity import ind_leq, subtype
from pcuic.surface import parse, parse_term


def build_context(max_level: int):
    src = "inductive N params 0 { nat : Type@{0} := zero : nat; succ : nat -> nat }.\n"
    for i in range(max_level + 1):
        src += (
            f"inductive L{i} params 1 {{ list : forall A : Type@{{{i}}}, Type@{{{i}}} :=\n"
            f"  nil : forall A : Type@{{{i}}}, list A;\n"
            f"  cons : forall A : Type@{{{i}}}, A -> list A -> list A }}.\n"
        )
    src += "axiom A : Type@{0}.\naxiom a : A.\naxiom l : L0.list A.\n"
    report, ctx = process_source(parse(src), "<grid>", fuel_budget=1_000_000)
    assert report.ok
    return ctx


def main(argv=None) -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-level", type=int, default=4)
    args = ap.parse_args(argv)
    ctx = build_context(args.max_level)
    levels = range(args.max_level + 1)
    failures = 0
    print("i j  ind_leq  sub  conv  nil  cons")
    for i in levels:
        for j in levels:
            leq = ind_leq(ctx, ctx.lookup_block(f"L{i}"), ctx.lookup_block(f"L{j}"))
            sub = subtype(
                ctx, parse_term(f"L{i}.list A", ctx), parse_term(f"L{j}.list A", ctx)
            ).holds
            eq = conv(ctx, parse_term(f"L{i}.list A", ctx), parse_term(f"L{j}.list A", ctx))
            nil = conv(ctx, parse_term(f"L{i}.nil A", ctx), parse_term(f"L{j}.nil A", ctx))
            cons = conv(
                ctx,
                parse_term(f"L{i}.cons A a l", ctx),
                parse_term(f"L{j}.cons A a l", ctx),
            )
            ok = all([leq, sub, eq, nil, cons])
            failures += not ok
            print(f"{i} {j}  {leq!s:7}  {sub!s:4} {eq!s:5} {nil!s:4} {cons!s}")
    print(f"failures: {failures}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
