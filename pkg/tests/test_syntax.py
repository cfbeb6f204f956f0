from hypothesis import given, settings
from hypothesis import strategies as st

import pytest

from pcuic.syntax import (
    App,
    Bound,
    Context,
    Hyp,
    Lam,
    Pi,
    PROP,
    SortT,
    Univ,
    Var,
    alpha_eq,
    free_vars,
    fresh_name,
    size,
    subst,
)

from .strategies import raw_terms

PROP_T = SortT(PROP)
TYPE0 = SortT(Univ(0))


def test_level_must_be_nonnegative():
    with pytest.raises(ValueError):
        Univ(-1)


class TestFreeVars:
    def test_prop_has_none(self):
        assert free_vars(PROP_T) == frozenset()

    def test_closed_identity(self):
        assert free_vars(Lam("y", PROP_T, Bound(0))) == frozenset()

    def test_shadowing_keeps_outer_occurrence(self):
        # x (fun x : Prop => x): the outer x is free, the inner one bound
        t = App(Var("x"), Lam("x", PROP_T, Bound(0)))
        assert free_vars(t) == frozenset({"x"})


class TestSubst:
    def test_variable_hit(self):
        assert subst(Var("x"), ["x"], [PROP_T]) == PROP_T

    def test_shadowed_binder_untouched(self):
        t = Lam("x", PROP_T, Bound(0))
        assert subst(t, ["x"], [TYPE0]) == t

    def test_simultaneous_not_sequential(self):
        # (y x)[x := y, y := Prop] is Prop y, not Prop Prop
        t = App(Var("y"), Var("x"))
        assert subst(t, ["x", "y"], [Var("y"), PROP_T]) == App(PROP_T, Var("y"))

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            subst(Var("x"), ["x"], [])

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            subst(Var("x"), ["x", "x"], [PROP_T, PROP_T])


class TestAlphaEq:
    def test_renaming(self):
        assert alpha_eq(Lam("x", PROP_T, Bound(0)), Lam("y", PROP_T, Bound(0)))

    def test_different_sorts(self):
        assert not alpha_eq(PROP_T, TYPE0)

    def test_different_bodies(self):
        assert not alpha_eq(Pi("x", PROP_T, Bound(0)), Pi("x", PROP_T, PROP_T))


class TestSize:
    def test_prop(self):
        assert size(PROP_T) == 2

    def test_empty_context(self):
        assert size(Context()) == 1

    def test_judgement(self):
        assert size((Context(), PROP_T)) == 2

    def test_entry_dominates_judgement(self):
        ctx = Context((Hyp("a", PROP_T),))
        t = Pi("x", PROP_T, Bound(0))
        assert size((ctx, t)) < size(ctx.push(Hyp("x", t)))
        assert size(ctx) < size((ctx, t))


@given(raw_terms(), st.sampled_from(["a", "b", "c"]), raw_terms())
@settings(max_examples=200)
def test_subst_free_var_containment(t, x, u):
    got = free_vars(subst(t, [x], [u]))
    assert got <= (free_vars(t) - {x}) | free_vars(u)


@given(raw_terms(), st.sampled_from(["a", "b", "c"]))
@settings(max_examples=200)
def test_subst_identity(t, x):
    assert alpha_eq(subst(t, [x], [Var(x)]), t)


@given(raw_terms(), raw_terms(), raw_terms())
@settings(max_examples=200)
def test_subst_simultaneity(t, u, v):
    x, y = "a", "b"
    z = fresh_name("z")
    two_step = subst(subst(subst(t, [x], [Var(z)]), [y], [v]), [z], [u])
    assert alpha_eq(subst(t, [x, y], [u, v]), two_step)


@given(raw_terms())
@settings(max_examples=200)
def test_size_positive_and_even(t):
    assert size(t) >= 2
    assert size(t) % 2 == 0


def test_block_size_matches_doubled_paper_value():
    from pcuic.surface import parse

    block = parse(
        "inductive N params 0 { nat : Type@{0} := zero : nat; succ : nat -> nat }."
    ).decls[0].block
    # members weigh 2 + 2 + 6; the block node adds 2 (paper: 6, doubled)
    assert size(block) == 12
