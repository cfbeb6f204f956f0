import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcuic.conversion import (
    Fuel,
    conv,
    iota_blocked_reason,
    normalize,
    whnf,
)
from pcuic.errors import FuelExhausted
from pcuic.surface import parse_term
from pcuic.syntax import (
    App,
    Bound,
    Context,
    Elim,
    IndRef,
    Lam,
    Pi,
    PROP,
    SortT,
    Var,
    alpha_eq,
    mk_app,
)

from .helpers import context_of, load_corpus, nat_context, numeral
from .strategies import conv_variants, nat_terms


class TestWhnf:
    def test_beta(self):
        ctx = nat_context()
        t = parse_term("(fun x : N.nat => x) N.zero", ctx)
        assert whnf(ctx, t).term() == IndRef("N", "zero")

    def test_delta(self):
        ctx = context_of("def x : Type@{1} := Prop.")
        assert whnf(ctx, Var("x")).term() == SortT(PROP)

    def test_zeta(self):
        ctx = nat_context()
        t = parse_term("let y := N.zero : N.nat in N.succ y", ctx)
        assert whnf(ctx, t).term() == parse_term("N.succ N.zero", ctx)

    def test_iota_single_step_shape(self):
        # eliminating succ zero exposes the successor case applied to the
        # predecessor and its elimination
        ctx = context_of(
            """
            inductive N params 0 { nat : Type@{0} := zero : nat; succ : nat -> nat }.
            axiom Q : nat -> Prop.
            axiom fz : Q zero.
            axiom fs : forall x : nat, Q x -> Q (succ x).
            """
        )
        t = Elim(
            parse_term("N.succ N.zero", ctx), "N", "nat", (Var("Q"),), (Var("fz"), Var("fs"))
        )
        r = whnf(ctx, t)
        assert r.head == Var("fs")
        assert r.spine[0] == IndRef("N", "zero")
        assert isinstance(r.spine[1], Elim)
        assert r.spine[1].scrutinee == IndRef("N", "zero")

    def test_whnf_result_invariants(self):
        ctx = nat_context()
        t = parse_term("add (add N.zero N.zero) N.zero", ctx)
        r = whnf(ctx, t)
        assert alpha_eq(mk_app(r.head, r.spine), r.term())
        assert not isinstance(r.head, Lam) or not r.spine

    def test_fuel_exhaustion_is_graceful(self):
        ctx = nat_context()
        t = parse_term("add (add N.zero N.zero) N.zero", ctx)
        with pytest.raises(FuelExhausted):
            whnf(ctx, t, Fuel(1))

    def test_iota_blocked_reasons(self):
        ctx = context_of(
            """
            inductive N params 0 { nat : Type@{0} := zero : nat; succ : nat -> nat }.
            inductive B params 0 { b : Type@{0} := tt : b }.
            axiom n : nat.
            """
        )
        motives = (Lam("_", IndRef("N", "nat"), IndRef("N", "nat")),)
        cases = (IndRef("N", "zero"), Lam("x", IndRef("N", "nat"), Lam("i", IndRef("N", "nat"), Bound(0))))
        neutral = Elim(Var("n"), "N", "nat", motives, cases)
        assert iota_blocked_reason(ctx, neutral) == "not-a-constructor"
        foreign = Elim(IndRef("B", "tt"), "N", "nat", motives, cases)
        assert iota_blocked_reason(ctx, foreign) == "constructor-of-unrelated-block"
        fine = Elim(IndRef("N", "zero"), "N", "nat", motives, cases)
        assert iota_blocked_reason(ctx, fine) is None


class TestNormalize:
    def test_add_example(self):
        ctx = nat_context()
        t = parse_term("add (N.succ (N.succ N.zero)) (N.succ N.zero)", ctx)
        assert alpha_eq(normalize(ctx, t), numeral(ctx, 3))

    def test_sorts_are_normal(self):
        assert normalize(Context(), SortT(PROP)) == SortT(PROP)

    def test_length_example(self):
        report, ctx = load_corpus("lists.pcuic")
        assert report.ok
        t = parse_term("length nat (L0.cons nat zero (L0.nil nat))", ctx)
        assert alpha_eq(normalize(ctx, t), parse_term("succ zero", ctx))

    def test_normalizes_under_binders(self):
        ctx = nat_context()
        t = parse_term("fun y : N.nat => add N.zero y", ctx)
        nf = normalize(ctx, t)
        assert alpha_eq(nf, parse_term("fun y : N.nat => y", ctx))


class TestConv:
    def test_reflexive_on_corpus_terms(self):
        ctx = nat_context()
        t = parse_term("add (N.succ N.zero)", ctx)
        assert conv(ctx, t, t)

    def test_eta(self):
        ctx = context_of(
            "inductive N params 0 { nat : Type@{0} := zero : nat; succ : nat -> nat }.\n"
            "axiom f : nat -> nat."
        )
        assert conv(ctx, Var("f"), parse_term("fun x : N.nat => f x", ctx))
        assert conv(ctx, parse_term("fun x : N.nat => f x", ctx), Var("f"))

    def test_cross_block_nil(self):
        from .helpers import lists_context

        ctx = lists_context(2)
        for i in range(3):
            for j in range(3):
                assert conv(
                    ctx,
                    parse_term(f"L{i}.nil A", ctx),
                    parse_term(f"L{j}.nil A", ctx),
                )

    def test_distinct_constructors_differ(self):
        ctx = nat_context()
        assert not conv(ctx, IndRef("N", "zero"), parse_term("N.succ N.zero", ctx))

    def test_pi_congruence(self):
        ctx = nat_context()
        a = parse_term("forall x : N.nat, N.nat", ctx)
        b = parse_term("forall y : N.nat, (fun z : Type@{0} => z) N.nat", ctx)
        assert conv(ctx, a, b)


@given(nat_terms())
@settings(max_examples=150, deadline=None)
def test_conv_reflexive(t):
    ctx = nat_context()
    assert conv(ctx, t, t)


@given(st.data())
@settings(max_examples=150, deadline=None)
def test_conv_symmetric_and_transitive(data):
    ctx = nat_context()
    t = data.draw(nat_terms())
    u = data.draw(conv_variants(t))
    v = data.draw(conv_variants(u))
    assert conv(ctx, t, u) == conv(ctx, u, t)
    assert conv(ctx, t, u) and conv(ctx, u, v)
    assert conv(ctx, t, v)
    # symmetry also holds on unequal pairs
    w = App(IndRef("N", "succ"), t)
    assert conv(ctx, t, w) == conv(ctx, w, t) == False


@given(st.data())
@settings(max_examples=100, deadline=None)
def test_conv_congruence_under_contexts(data):
    # conv(t, u) implies conv(C[t], C[u]) for application, lambda and
    # product contexts
    ctx = nat_context()
    t = data.draw(nat_terms(depth=2))
    u = data.draw(conv_variants(t))
    nat = IndRef("N", "nat")
    holes = [
        lambda s: App(IndRef("N", "succ"), s),
        lambda s: App(App(Var("add"), s), numeral_(1)),
        lambda s: Lam("x", nat, s),
        lambda s: Pi("x", nat, s),
        lambda s: LetIn_(s),
    ]
    fill = data.draw(st.sampled_from(holes))
    assert conv(ctx, fill(t), fill(u))


def numeral_(k):
    t = IndRef("N", "zero")
    for _ in range(k):
        t = App(IndRef("N", "succ"), t)
    return t


def LetIn_(s):
    from pcuic.syntax import LetIn

    return LetIn("q", numeral_(0), IndRef("N", "nat"), s)


@given(nat_terms())
@settings(max_examples=150, deadline=None)
def test_conv_agrees_with_normalize(t):
    ctx = nat_context()
    u = App(Lam("k", IndRef("N", "nat"), Bound(0)), t)
    assert alpha_eq(normalize(ctx, t), normalize(ctx, u))
    assert conv(ctx, t, u)


def test_lambda_domains_not_compared():
    # lambda vs lambda compares bodies only; the domains may differ up to
    # reduction without affecting equality
    ctx = nat_context()
    a = parse_term("fun x : N.nat => N.zero", ctx)
    b = parse_term("fun x : (fun T : Type@{0} => T) N.nat => N.zero", ctx)
    assert conv(ctx, a, b)


def test_applied_products_never_compare_equal():
    ctx = nat_context()
    t = App(parse_term("forall x : Prop, Prop", ctx), IndRef("N", "zero"))
    u = App(parse_term("forall x : Prop, Prop", ctx), parse_term("N.succ N.zero", ctx))
    assert not conv(ctx, t, u)
