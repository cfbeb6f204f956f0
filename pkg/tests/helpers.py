"""Shared fixtures: corpus loading and small context builders."""

from __future__ import annotations

from pathlib import Path

from pcuic.cli import Report, process_source
from pcuic.surface import parse
from pcuic.syntax import Context

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def load_corpus(name: str) -> tuple[Report, Context]:
    text = (CORPUS / name).read_bytes()
    return process_source(parse(text), name, fuel_budget=1_000_000)


def context_of(source_text: str) -> Context:
    report, ctx = process_source(parse(source_text), "<inline>", fuel_budget=1_000_000)
    assert report.ok, [o.error for o in report.outcomes if o.error]
    return ctx


NAT_SRC = """
inductive N params 0 { nat : Type@{0} := zero : nat; succ : nat -> nat }.
def add : nat -> nat -> nat :=
  fun n : nat => fun m : nat =>
    Elim(n; N.nat; fun k : nat => nat; m, fun x : nat => fun ih : nat => succ ih).
"""


def list_block_src(level: int, block: str) -> str:
    return (
        f"inductive {block} params 1 {{ list : forall A : Type@{{{level}}}, Type@{{{level}}} :=\n"
        f"  nil : forall A : Type@{{{level}}}, list A;\n"
        f"  cons : forall A : Type@{{{level}}}, A -> list A -> list A }}.\n"
    )


def lists_context(max_level: int) -> Context:
    src = NAT_SRC
    for i in range(max_level + 1):
        src += list_block_src(i, f"L{i}")
    src += "axiom A : Type@{0}.\naxiom a : A.\naxiom l : L0.list A.\n"
    return context_of(src)


def nat_context() -> Context:
    return context_of(NAT_SRC)


def numeral(ctx: Context, k: int):
    from pcuic.syntax import App, IndRef

    t = IndRef("N", "zero")
    for _ in range(k):
        t = App(IndRef("N", "succ"), t)
    return t
