#!/usr/bin/env python3
"""Consistency smoke test: enumerate every closed normal term up to a
structural size bound and verify that none inhabits `forall x : Prop, x`.

Usage: python scripts/consistency_search.py [--max-size 12] [--max-level 2]
"""

from __future__ import annotations

import argparse
import sys
import time
from functools import lru_cache
from typing import Iterator

from pcuic.errors import CheckError
from pcuic.syntax import (
    App,
    Bound,
    Context,
    Lam,
    Pi,
    PROP,
    SortT,
    Term,
    Univ,
)
from pcuic.typecheck import check

TARGET = Pi("x", SortT(PROP), Bound(0))  # forall x : Prop, x


def closed_normal_terms(max_size: int, max_level: int = 2) -> Iterator[Term]:
    """All locally closed beta/zeta-normal terms of (doubled-scale)
    structural size at most `max_size`; the empty context has no
    definitions or blocks, so delta and iota redexes cannot occur.
    Every size is even (leaves weigh 2, each node adds 2), so exact-size
    enumeration is exhaustive and duplicate-free."""

    leaves = [SortT(PROP)] + [SortT(Univ(i)) for i in range(max_level + 1)]

    @lru_cache(maxsize=None)
    def exact(size: int, depth: int) -> tuple[Term, ...]:
        if size == 2:
            return tuple(leaves) + tuple(Bound(k) for k in range(depth))
        out: list[Term] = []
        for left in range(2, size - 3, 2):
            right = size - 2 - left
            for dom in exact(left, depth):
                for body in exact(right, depth + 1):
                    out.append(Pi("x", dom, body))
                    out.append(Lam("x", dom, body))
            for f in exact(left, depth):
                if isinstance(f, Lam):
                    continue  # beta redex: not normal
                for a in exact(right, depth):
                    out.append(App(f, a))
        return tuple(out)

    for size in range(2, max_size + 1, 2):
        yield from exact(size, 0)


def search(max_size: int, max_level: int = 2) -> tuple[int, list[Term]]:
    """Count enumerated terms and collect any inhabitants of the target."""
    empty = Context()
    inhabitants: list[Term] = []
    count = 0
    for t in closed_normal_terms(max_size, max_level):
        count += 1
        try:
            check(empty, t, TARGET, fuel=10_000)
        except CheckError:
            continue
        inhabitants.append(t)
    return count, inhabitants


def main(argv=None) -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-size", type=int, default=12)
    ap.add_argument("--max-level", type=int, default=2)
    args = ap.parse_args(argv)
    start = time.perf_counter()
    count, inhabitants = search(args.max_size, args.max_level)
    elapsed = time.perf_counter() - start
    print(f"enumerated {count} closed normal terms of size <= {args.max_size}")
    print(f"inhabitants of 'forall x : Prop, x': {len(inhabitants)}")
    print(f"elapsed: {elapsed:.2f}s")
    if inhabitants:
        from pcuic.surface import print_term

        for t in inhabitants:
            print("  INHABITANT:", print_term(t))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
