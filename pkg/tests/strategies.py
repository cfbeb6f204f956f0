"""Hypothesis generators: raw locally-closed terms, and well-typed
nat-valued terms built type-directed in the nat context."""

from __future__ import annotations

from hypothesis import strategies as st

from pcuic.syntax import (
    App,
    Bound,
    Elim,
    IndRef,
    Lam,
    LetIn,
    Pi,
    PROP,
    SortT,
    Term,
    Univ,
    Var,
    close_term,
)

FREE_NAMES = ("a", "b", "c")
BINDER_NAMES = ("x", "y", "z", "w")

_sorts = st.one_of(
    st.just(SortT(PROP)), st.integers(0, 2).map(lambda i: SortT(Univ(i)))
)


@st.composite
def raw_terms(draw, binders: int = 0, depth: int = 3) -> Term:
    """Locally closed terms; free variables come from FREE_NAMES."""
    leaf_opts = ["sort", "free"]
    if binders:
        leaf_opts.append("bound")
    if depth == 0:
        choice = draw(st.sampled_from(leaf_opts))
    else:
        choice = draw(
            st.sampled_from(leaf_opts + ["pi", "lam", "app", "let", "pi", "lam", "app"])
        )
    if choice == "sort":
        return draw(_sorts)
    if choice == "free":
        return Var(draw(st.sampled_from(FREE_NAMES)))
    if choice == "bound":
        return Bound(draw(st.integers(0, binders - 1)))
    name = draw(st.sampled_from(BINDER_NAMES))
    if choice == "pi":
        return Pi(
            name,
            draw(raw_terms(binders, depth - 1)),
            draw(raw_terms(binders + 1, depth - 1)),
        )
    if choice == "lam":
        return Lam(
            name,
            draw(raw_terms(binders, depth - 1)),
            draw(raw_terms(binders + 1, depth - 1)),
        )
    if choice == "let":
        return LetIn(
            name,
            draw(raw_terms(binders, depth - 1)),
            draw(raw_terms(binders, depth - 1)),
            draw(raw_terms(binders + 1, depth - 1)),
        )
    return App(draw(raw_terms(binders, depth - 1)), draw(raw_terms(binders, depth - 1)))


def _num(k: int) -> Term:
    t: Term = IndRef("N", "zero")
    for _ in range(k):
        t = App(IndRef("N", "succ"), t)
    return t


NAT = IndRef("N", "nat")


@st.composite
def nat_terms(draw, depth: int = 3, scope: tuple[str, ...] = ()) -> Term:
    """Well-typed terms of type nat in the nat context, closed except for
    names in `scope` (which are nat-typed binder variables)."""
    opts = ["lit"]
    if scope:
        opts.append("var")
    if depth > 0:
        opts += ["succ", "add", "beta", "let", "elim"]
    choice = draw(st.sampled_from(opts))
    if choice == "lit":
        return _num(draw(st.integers(0, 3)))
    if choice == "var":
        return Var(draw(st.sampled_from(scope)))
    if choice == "succ":
        return App(IndRef("N", "succ"), draw(nat_terms(depth - 1, scope)))
    if choice == "add":
        return App(
            App(Var("add"), draw(nat_terms(depth - 1, scope))),
            draw(nat_terms(depth - 1, scope)),
        )
    if choice == "beta":
        x = f"v{draw(st.integers(0, 99))}"
        body = draw(nat_terms(depth - 1, scope + (x,)))
        return App(Lam(x, NAT, close_term(body, x)), draw(nat_terms(depth - 1, scope)))
    if choice == "let":
        x = f"v{draw(st.integers(0, 99))}"
        body = draw(nat_terms(depth - 1, scope + (x,)))
        return LetIn(x, draw(nat_terms(depth - 1, scope)), NAT, close_term(body, x))
    succ_case = Lam("p", NAT, Lam("ih", NAT, App(IndRef("N", "succ"), Bound(0))))
    return Elim(
        draw(nat_terms(depth - 1, scope)),
        "N",
        "nat",
        (Lam("_", NAT, NAT),),
        (draw(nat_terms(depth - 1, scope)), succ_case),
    )


@st.composite
def conv_variants(draw, t: Term) -> Term:
    """A term judgementally equal to `t` by construction."""
    how = draw(st.sampled_from(["same", "beta", "let", "elim-zero", "add-zero"]))
    if how == "same":
        return t
    if how == "beta":
        return App(Lam("u", NAT, Bound(0)), t)
    if how == "let":
        return LetIn("u", t, NAT, Bound(0))
    if how == "elim-zero":
        succ_case = Lam("p", NAT, Lam("ih", NAT, App(IndRef("N", "succ"), Bound(0))))
        return Elim(IndRef("N", "zero"), "N", "nat", (Lam("_", NAT, NAT),), (t, succ_case))
    return App(App(Var("add"), _num(0)), t)
