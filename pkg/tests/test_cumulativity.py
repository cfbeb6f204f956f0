from hypothesis import given, settings
from hypothesis import strategies as st

from pcuic.conversion import conv
from pcuic.cumulativity import applied_ind_subtype, ind_leq, subtype
from pcuic.surface import parse_term
from pcuic.syntax import (
    App,
    Context,
    Hyp,
    IndRef,
    Pi,
    PROP,
    SortT,
    Univ,
    Var,
    fresh_name,
)

from .helpers import context_of, lists_context, nat_context


class TestSubtypeBasics:
    def test_prop_in_type(self):
        v = subtype(Context(), SortT(PROP), SortT(Univ(3)))
        assert v.holds and v.trace == ("Prop-in-Type",)

    def test_universe_order(self):
        assert subtype(Context(), SortT(Univ(1)), SortT(Univ(2))).holds
        assert subtype(Context(), SortT(Univ(2)), SortT(Univ(2))).holds
        v = subtype(Context(), SortT(Univ(2)), SortT(Univ(1)))
        assert not v.holds and v.trace == ()

    def test_type_not_below_prop(self):
        assert not subtype(Context(), SortT(Univ(0)), SortT(PROP)).holds

    def test_covariant_codomain(self):
        ctx = Context()
        a = parse_term("forall x : Prop, Type@{0}")
        b = parse_term("forall x : Prop, Type@{1}")
        v = subtype(ctx, a, b)
        assert v.holds and v.trace == ("Cum-Prod", "Cum-Type")

    def test_domains_must_be_equal_not_contravariant(self):
        # Type@{0} <= Type@{1} would allow contravariance; the rule demands
        # judgemental equality of domains instead
        a = parse_term("forall x : Type@{1}, Prop")
        b = parse_term("forall x : Type@{0}, Prop")
        assert not subtype(Context(), a, b).holds
        assert not subtype(Context(), b, a).holds

    def test_trace_nonempty_iff_holds(self):
        cases = [
            (SortT(PROP), SortT(Univ(0))),
            (SortT(Univ(1)), SortT(Univ(0))),
            (SortT(Univ(0)), SortT(Univ(0))),
        ]
        for a, b in cases:
            v = subtype(Context(), a, b)
            assert v.holds == bool(v.trace)


class TestIndLeq:
    def test_reflexive_on_nat(self):
        ctx = nat_context()
        n = ctx.lookup_block("N")
        assert ind_leq(ctx, n, n)

    def test_list_levels_all_related(self):
        ctx = lists_context(4)
        for i in range(5):
            for j in range(5):
                assert ind_leq(
                    ctx, ctx.lookup_block(f"L{i}"), ctx.lookup_block(f"L{j}")
                ), (i, j)

    def test_constructor_argument_levels_matter(self):
        ctx = context_of(
            """
            inductive B1 params 0 { d : Type@{2} := mk : Type@{1} -> d }.
            inductive B2 params 0 { d : Type@{2} := mk : Type@{0} -> d }.
            """
        )
        assert not ind_leq(ctx, ctx.lookup_block("B1"), ctx.lookup_block("B2"))
        assert ind_leq(ctx, ctx.lookup_block("B2"), ctx.lookup_block("B1"))

    def test_arity_levels_compared(self):
        ctx = context_of(
            """
            inductive C1 params 0 { d : Type@{1} -> Type@{2} := mk : d Type@{0} }.
            inductive C2 params 0 { d : Type@{2} -> Type@{2} := mk : d Type@{0} }.
            """
        )
        assert ind_leq(ctx, ctx.lookup_block("C1"), ctx.lookup_block("C2"))
        assert not ind_leq(ctx, ctx.lookup_block("C2"), ctx.lookup_block("C1"))

    def test_member_names_must_match(self):
        ctx = context_of(
            """
            inductive D1 params 0 { d : Type@{0} := mk : d }.
            inductive D2 params 0 { e : Type@{0} := mk : e }.
            """
        )
        assert not ind_leq(ctx, ctx.lookup_block("D1"), ctx.lookup_block("D2"))


class TestAppliedIndSubtype:
    def test_fully_applied_lists(self):
        ctx = lists_context(1)
        v = applied_ind_subtype(
            ctx, parse_term("L0.list A", ctx), parse_term("L1.list A", ctx)
        )
        assert v.holds and v.trace == ("C-Ind",)

    def test_partial_application_rejected(self):
        ctx = lists_context(1)
        v = applied_ind_subtype(
            ctx, parse_term("L0.list", ctx), parse_term("L1.list", ctx)
        )
        assert not v.holds
        assert v.reason == "not fully applied"

    def test_same_block_reflexivity(self):
        ctx = nat_context()
        v = applied_ind_subtype(ctx, IndRef("N", "nat"), IndRef("N", "nat"))
        assert v.holds

    def test_antisymmetry_gives_equality(self):
        ctx = lists_context(3)
        for i, j in [(0, 3), (3, 0), (1, 2)]:
            a = parse_term(f"L{i}.list A", ctx)
            b = parse_term(f"L{j}.list A", ctx)
            assert applied_ind_subtype(ctx, a, b).holds
            assert applied_ind_subtype(ctx, b, a).holds
            assert conv(ctx, a, b)


class TestSubsumptionIntoSubtype:
    def test_unapplied_same_block_falls_back_to_conv(self):
        ctx = lists_context(0)
        v = subtype(ctx, parse_term("L0.list", ctx), parse_term("L0.list", ctx))
        assert v.holds and v.trace == ("Eq-Cum",)

    def test_partial_cross_block_keeps_reason(self):
        ctx = lists_context(1)
        v = subtype(ctx, parse_term("L0.list", ctx), parse_term("L1.list", ctx))
        assert not v.holds and v.reason == "not fully applied"


# --- generated preorder properties ---------------------------------------

# Type skeletons are monotone functions from a level to a type; for
# lv1 <= lv2 the instances are subtypes by construction.


@st.composite
def type_skeletons(draw, depth=2):
    kind = draw(
        st.sampled_from(["univ", "prop", "nat", "list", "pi"] if depth else ["univ", "prop", "nat"])
    )
    if kind == "univ":
        c = draw(st.integers(0, 2))
        return lambda lv: SortT(Univ(lv + c))
    if kind == "prop":
        return lambda lv: SortT(PROP)
    if kind == "nat":
        return lambda lv: IndRef("N", "nat")
    if kind == "list":
        c = draw(st.integers(0, 2))
        return lambda lv: App(IndRef(f"L{min(lv + c, 4)}", "list"), Var("A"))
    dom = draw(type_skeletons(0))
    cod = draw(type_skeletons(depth - 1))
    name = fresh_name("x")
    return lambda lv: Pi(name, dom(0), cod(lv))


@given(st.data())
@settings(max_examples=200, deadline=None)
def test_subtype_reflexive_and_transitive(data):
    ctx = lists_context(4)
    skel = data.draw(type_skeletons())
    lv1 = data.draw(st.integers(0, 2))
    lv2 = data.draw(st.integers(lv1, 2))
    lv3 = data.draw(st.integers(lv2, 2))
    t1, t2, t3 = skel(lv1), skel(lv2), skel(lv3)
    assert subtype(ctx, t1, t1).holds
    assert subtype(ctx, t1, t2).holds
    assert subtype(ctx, t2, t3).holds
    assert subtype(ctx, t1, t3).holds


@given(st.data())
@settings(max_examples=200, deadline=None)
def test_subtype_weakening(data):
    ctx = lists_context(4)
    skel = data.draw(type_skeletons())
    lv1 = data.draw(st.integers(0, 2))
    lv2 = data.draw(st.integers(0, 2))
    t1, t2 = skel(lv1), skel(lv2)
    before = subtype(ctx, t1, t2).holds
    extended = ctx.push(Hyp(fresh_name("fresh"), SortT(Univ(0))))
    assert subtype(extended, t1, t2).holds == before


def test_ind_leq_arity_length_mismatch():
    ctx = context_of(
        """
        inductive A1 params 0 { d : Type@{1} -> Type@{2} := mk : d Type@{0} }.
        inductive A2 params 0 { d : Type@{2} := mk : d }.
        """
    )
    assert not ind_leq(ctx, ctx.lookup_block("A1"), ctx.lookup_block("A2"))
    assert not ind_leq(ctx, ctx.lookup_block("A2"), ctx.lookup_block("A1"))


def test_ind_leq_param_count_mismatch():
    ctx = context_of(
        """
        inductive P0 params 0 { d : forall A : Type@{0}, Type@{1} := mk : forall A : Type@{0}, d A }.
        inductive P1 params 1 { d : forall A : Type@{0}, Type@{1} := mk : forall A : Type@{0}, d A }.
        """
    )
    assert not ind_leq(ctx, ctx.lookup_block("P0"), ctx.lookup_block("P1"))


INDEXED_LEVELS_SRC = """
inductive N params 0 { nat : Type@{0} := zero : nat; succ : nat -> nat }.
inductive Q0 params 2 { eq : forall A : Type@{0}, forall x : A, A -> Type@{0} :=
  refl : forall A : Type@{0}, forall x : A, eq A x x }.
inductive Q1 params 2 { eq : forall A : Type@{1}, forall x : A, A -> Type@{1} :=
  refl : forall A : Type@{1}, forall x : A, eq A x x }.
"""


def test_indexed_family_cumulativity():
    ctx = context_of(INDEXED_LEVELS_SRC)
    q0, q1 = ctx.lookup_block("Q0"), ctx.lookup_block("Q1")
    assert ind_leq(ctx, q0, q1) and ind_leq(ctx, q1, q0)
    t0 = parse_term("Q0.eq N.nat N.zero N.zero", ctx)
    t1 = parse_term("Q1.eq N.nat N.zero N.zero", ctx)
    v = applied_ind_subtype(ctx, t0, t1)
    assert v.holds and v.trace == ("C-Ind",)
    assert conv(ctx, t0, t1)
    assert conv(
        ctx,
        parse_term("Q0.refl N.nat N.zero", ctx),
        parse_term("Q1.refl N.nat N.zero", ctx),
    )


def test_cross_block_iota_on_indexed_family():
    # eliminating a proof built in the included block with the including
    # block's eliminator
    from pcuic.conversion import normalize
    from pcuic.syntax import IndRef, alpha_eq
    from pcuic.typecheck import infer

    ctx = context_of(INDEXED_LEVELS_SRC)
    t = parse_term(
        "Elim(Q0.refl N.nat N.zero; Q1.eq;"
        " fun B : Type@{1} => fun u : B => fun v : B => fun h : Q1.eq B u v => N.nat;"
        " fun B : Type@{1} => fun u : B => N.zero)",
        ctx,
    )
    assert conv(ctx, infer(ctx, t), IndRef("N", "nat"))
    assert alpha_eq(normalize(ctx, t), IndRef("N", "zero"))
