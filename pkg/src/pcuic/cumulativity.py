"""The subtyping judgement, including cumulativity between inductive blocks.

The algorithm is syntax-directed over weak-head normal forms:

    Prop <= Type@{i}                  (Prop-in-Type)
    Type@{i} <= Type@{j}  iff i <= j  (Cum-Type)
    products: equal domains, subtyped codomains  (Cum-Prod)
    applied inductive types: block inclusion     (C-Ind)
    anything else: judgemental equality          (Eq-Cum)

Transitivity, weakening and the eq-compatibility rules are emergent
properties of this algorithm and are property-tested, not cased.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .syntax import (
    Context,
    Hyp,
    IndRef,
    InductiveBlock,
    Pi,
    Prop,
    SortT,
    Term,
    Univ,
    Var,
    app_spine,
    fresh_name,
    open_term,
    subst,
)


@dataclass(frozen=True)
class SubtypeVerdict:
    """Outcome of a subtyping query with the applied rule names; the trace
    is nonempty exactly when the relation holds."""

    holds: bool
    trace: tuple[str, ...] = ()
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.holds


def _yes(*trace: str) -> SubtypeVerdict:
    return SubtypeVerdict(True, trace)


def _no(reason: str) -> SubtypeVerdict:
    return SubtypeVerdict(False, (), reason)


def binder_count(t: Term) -> int:
    n = 0
    while isinstance(t, Pi):
        n += 1
        t = t.codomain
    return n


def fully_applied(block: InductiveBlock, member: str, spine_len: int) -> bool:
    """Whether a member reference applied to `spine_len` arguments is fully
    applied: parameters plus arity for an inductive type, all binders for a
    constructor."""
    mtype = block.ind_type(member)
    if mtype is None:
        mtype = block.constr_type(member)
    if mtype is None:
        return False
    return spine_len == binder_count(mtype)


def subtype(
    ctx: Context, t: Term, u: Term, fuel=None
) -> SubtypeVerdict:
    from .conversion import as_fuel, conv, whnf

    fuel = as_fuel(fuel)
    rt = whnf(ctx, t, fuel)
    ru = whnf(ctx, u, fuel)
    a, b = rt.head, ru.head

    if isinstance(a, SortT) and isinstance(b, SortT) and not rt.spine and not ru.spine:
        sa, sb = a.sort, b.sort
        if isinstance(sa, Prop) and isinstance(sb, Univ):
            return _yes("Prop-in-Type")
        if isinstance(sa, Univ) and isinstance(sb, Univ):
            if sa.level <= sb.level:
                return _yes("Cum-Type")
            return _no(f"universe level {sa.level} exceeds {sb.level}")
        if isinstance(sa, Prop) and isinstance(sb, Prop):
            return _yes("Eq-Cum")
        return _no("Type is not included in Prop")

    if isinstance(a, Pi) and isinstance(b, Pi) and not rt.spine and not ru.spine:
        # Cum-Prod: domains must be judgementally equal, not contravariant
        if not conv(ctx, a.domain, b.domain, fuel):
            return _no("product domains are not judgementally equal")
        x = fresh_name(a.name)
        inner = ctx.push(Hyp(x, a.domain))
        sub = subtype(
            inner, open_term(a.codomain, Var(x)), open_term(b.codomain, Var(x)), fuel
        )
        if sub.holds:
            return SubtypeVerdict(True, ("Cum-Prod",) + sub.trace)
        return sub

    ind_verdict: Optional[SubtypeVerdict] = None
    if isinstance(a, IndRef) and isinstance(b, IndRef) and a.block != b.block:
        blk_a = ctx.lookup_block(a.block)
        blk_b = ctx.lookup_block(b.block)
        if (
            blk_a is not None
            and blk_b is not None
            and blk_a.member_kind(a.member) == "ind"
            and blk_b.member_kind(b.member) == "ind"
        ):
            ind_verdict = applied_ind_subtype(ctx, rt.term(), ru.term(), fuel)
            if ind_verdict.holds:
                return ind_verdict
            # fall through: judgemental equality may still apply

    if conv(ctx, rt.term(), ru.term(), fuel):
        return _yes("Eq-Cum")
    if ind_verdict is not None:
        return ind_verdict
    return _no("terms are not judgementally equal")


def applied_ind_subtype(
    ctx: Context, t: Term, u: Term, fuel=None
) -> SubtypeVerdict:
    """C-Ind: `B.d vs <= B'.d vs` for fully applied inductive types of
    included blocks, with pointwise judgementally equal arguments."""
    from .conversion import as_fuel, conv

    fuel = as_fuel(fuel)
    head_t, spine_t = app_spine(t)
    head_u, spine_u = app_spine(u)
    if not (isinstance(head_t, IndRef) and isinstance(head_u, IndRef)):
        return _no("heads are not inductive-type references")
    if head_t.member != head_u.member:
        return _no("inductive-type names differ")
    blk_t = ctx.lookup_block(head_t.block)
    blk_u = ctx.lookup_block(head_u.block)
    if blk_t is None or blk_u is None:
        return _no("unknown block")
    if (
        blk_t.member_kind(head_t.member) != "ind"
        or blk_u.member_kind(head_u.member) != "ind"
    ):
        return _no("heads are not inductive-type references")
    if not fully_applied(blk_t, head_t.member, len(spine_t)) or not fully_applied(
        blk_u, head_u.member, len(spine_u)
    ):
        return _no("not fully applied")
    if len(spine_t) != len(spine_u):
        return _no("argument counts differ")
    if not all(conv(ctx, a, b, fuel) for a, b in zip(spine_t, spine_u)):
        return _no("arguments are not judgementally equal")
    if not ind_leq(ctx, blk_t, blk_u, fuel):
        return _no("left block is not included in right block")
    return _yes("C-Ind")


def ind_leq(
    ctx: Context, left: InductiveBlock, right: InductiveBlock, fuel=None
) -> bool:
    """Block inclusion: same member names and parameter count; arities and
    non-parameter constructor arguments pairwise subtyped, and constructor
    conclusion indices judgementally equal, all under the left block's
    telescopes.  Parameters themselves are never compared."""
    from .conversion import as_fuel, conv

    fuel = as_fuel(fuel)
    if left is right or left == right:
        return True
    if left.ind_names != right.ind_names or left.constr_names != right.constr_names:
        return False
    if left.param_count != right.param_count:
        return False
    n = left.param_count

    # Recursive member occurrences are compared nominally, exactly as the
    # rule does; rename them to shared inert variables so a context entry
    # with the same name cannot interfere.
    renaming = {d: fresh_name(d) for d in left.ind_names}
    names = list(renaming)
    inert = [Var(renaming[d]) for d in names]

    def prepare(ty: Term) -> Term:
        return subst(ty, names, inert)

    for d in left.ind_names:
        lt, rt = prepare(left.ind_type(d)), prepare(right.ind_type(d))
        inner, lt, rt = _open_shared(ctx, lt, rt, n, base="p")
        if inner is None:
            return False
        while isinstance(lt, Pi) or isinstance(rt, Pi):
            if not (isinstance(lt, Pi) and isinstance(rt, Pi)):
                return False  # arity lengths differ
            if not subtype(inner, lt.domain, rt.domain, fuel).holds:
                return False
            z = fresh_name(lt.name if lt.name != "_" else "z")
            inner = inner.push(Hyp(z, lt.domain))
            lt = open_term(lt.codomain, Var(z))
            rt = open_term(rt.codomain, Var(z))
        if not (isinstance(lt, SortT) and isinstance(rt, SortT)):
            return False
        # the sorts themselves are not constrained

    for c in left.constr_names:
        lt, rt = prepare(left.constr_type(c)), prepare(right.constr_type(c))
        inner, lt, rt = _open_shared(ctx, lt, rt, n, base="p")
        if inner is None:
            return False
        while isinstance(lt, Pi) or isinstance(rt, Pi):
            if not (isinstance(lt, Pi) and isinstance(rt, Pi)):
                return False
            if not subtype(inner, lt.domain, rt.domain, fuel).holds:
                return False
            x = fresh_name(lt.name if lt.name != "_" else "x")
            inner = inner.push(Hyp(x, lt.domain))
            lt = open_term(lt.codomain, Var(x))
            rt = open_term(rt.codomain, Var(x))
        lh, largs = app_spine(lt)
        rh, rargs = app_spine(rt)
        if lh != rh or len(largs) != len(rargs):
            return False
        if not all(conv(inner, a, b, fuel) for a, b in zip(largs, rargs)):
            return False
    return True


def _open_shared(
    ctx: Context, lt: Term, rt: Term, n: int, base: str
) -> tuple[Optional[Context], Term, Term]:
    """Open the first `n` binders of both types with shared fresh variables
    hypothesized at the left type's domains."""
    inner = ctx
    for _ in range(n):
        if not (isinstance(lt, Pi) and isinstance(rt, Pi)):
            return None, lt, rt
        p = fresh_name(lt.name if lt.name != "_" else base)
        inner = inner.push(Hyp(p, lt.domain))
        lt = open_term(lt.codomain, Var(p))
        rt = open_term(rt.codomain, Var(p))
    return inner, lt, rt
