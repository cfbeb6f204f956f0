"""Type inference and checking with cumulativity subsumption.

`infer` returns a principal type: sorts get their least type and the
subsumption rule (`check`) recovers every larger one.
"""

from __future__ import annotations

from .conversion import Fuel, as_fuel, conv, whnf
from .cumulativity import subtype
from .errors import CheckError
from .inductive import check_block_wf, elim_type, qualify_members
from .syntax import (
    App,
    BlockDecl,
    Bound,
    Context,
    Def,
    Elim,
    Hyp,
    IndRef,
    Lam,
    LetIn,
    Pi,
    PROP,
    Prop,
    Sort,
    SortT,
    Term,
    Univ,
    Var,
    close_term,
    fresh_name,
    mk_app,
    open_telescope,
    open_term,
    subst1,
)


def prod_rule(s1: Sort, s2: Sort) -> Sort:
    """The sort of a product from the sorts of its domain and codomain;
    Prop is impredicative."""
    if isinstance(s2, Prop):
        return PROP
    if isinstance(s1, Prop):
        return s2
    return Univ(max(s1.level, s2.level))


def wf_ctx(ctx: Context, fuel=None) -> None:
    """Re-check a whole context: every entry must be accepted against the
    prefix before it."""
    fuel = as_fuel(fuel)
    prefix = Context()
    for i, entry in enumerate(ctx.entries):
        try:
            if isinstance(entry, Hyp):
                _check_fresh_name(prefix, entry.name)
                sort_of(prefix, entry.type, fuel)
            elif isinstance(entry, Def):
                _check_fresh_name(prefix, entry.name)
                sort_of(prefix, entry.type, fuel)
                check(prefix, entry.body, entry.type, fuel)
            elif isinstance(entry, BlockDecl):
                if prefix.lookup_block(entry.name) is not None:
                    raise CheckError(
                        kind="duplicate-name",
                        message=f"block name {entry.name!r} is already declared",
                    )
                check_block_wf(prefix, entry.name, entry.block)
        except CheckError as err:
            err.message = f"context entry {i}: {err.message}"
            raise
        prefix = prefix.push(entry)


def _check_fresh_name(ctx: Context, name: str) -> None:
    if ctx.lookup(name) is not None:
        raise CheckError(
            kind="duplicate-name", message=f"name {name!r} is already declared"
        )


def sort_of(ctx: Context, t: Term, fuel=None) -> Sort:
    """Infer the type of `t` and demand it is a sort."""
    fuel = as_fuel(fuel)
    ty = infer(ctx, t, fuel)
    r = whnf(ctx, ty, fuel)
    if isinstance(r.head, SortT) and not r.spine:
        return r.head.sort
    raise CheckError(kind="not-a-sort", message="expected a type", actual=ty)


def infer(ctx: Context, t: Term, fuel=None, strict_app: bool = False) -> Term:
    """The principal type of `t` in `ctx` (which is assumed well-formed)."""
    fuel = as_fuel(fuel)
    return _infer(ctx, t, fuel, strict_app)


def _infer(ctx: Context, t: Term, fuel: Fuel, strict: bool) -> Term:
    match t:
        case SortT(s):
            # least instances; subsumption recovers the rest
            return SortT(Univ(0)) if isinstance(s, Prop) else SortT(Univ(s.level + 1))
        case Var(x):
            entry = ctx.lookup(x)
            if entry is None:
                raise CheckError(kind="unbound-variable", message=f"variable {x!r}")
            return entry.type
        case Bound(k):
            raise CheckError(
                kind="unbound-variable", message=f"dangling binder index {k}"
            )
        case Pi(name, domain, codomain):
            s1 = sort_of(ctx, domain, fuel)
            x = fresh_name(name)
            s2 = sort_of(ctx.push(Hyp(x, domain)), open_term(codomain, Var(x)), fuel)
            return SortT(prod_rule(s1, s2))
        case Lam(name, domain, body):
            sort_of(ctx, domain, fuel)
            x = fresh_name(name)
            inner = ctx.push(Hyp(x, domain))
            body_ty = _infer(inner, open_term(body, Var(x)), fuel, strict)
            sort_of(inner, body_ty, fuel)  # the product must itself be sorted
            return Pi(name, domain, close_term(body_ty, x))
        case LetIn(name, definiens, annotation, body):
            sort_of(ctx, annotation, fuel)
            check(ctx, definiens, annotation, fuel, strict_app=strict)
            x = fresh_name(name)
            inner = ctx.push(Def(x, definiens, annotation))
            body_ty = _infer(inner, open_term(body, Var(x)), fuel, strict)
            return subst1(body_ty, x, definiens)
        case App(f, a):
            f_ty = _infer(ctx, f, fuel, strict)
            r = whnf(ctx, f_ty, fuel)
            if not isinstance(r.head, Pi) or r.spine:
                raise CheckError(
                    kind="not-a-function",
                    message="application head is not a function",
                    actual=f_ty,
                )
            pi = r.head
            if strict:
                a_ty = _infer(ctx, a, fuel, strict)
                if not conv(ctx, a_ty, pi.domain, fuel):
                    raise CheckError(
                        kind="app-mismatch",
                        message="argument type does not match the domain",
                        expected=pi.domain,
                        actual=a_ty,
                    )
            else:
                check(ctx, a, pi.domain, fuel)
            return open_term(pi.codomain, a)
        case IndRef(block_name, member):
            block = ctx.lookup_block(block_name)
            if block is None:
                raise CheckError(
                    kind="unbound-variable", message=f"unknown block {block_name!r}"
                )
            ty = block.ind_type(member)
            if ty is not None:
                return ty
            ty = block.constr_type(member)
            if ty is not None:
                # inductive names of the block become global references
                return qualify_members(block_name, block, ty)
            raise CheckError(
                kind="unbound-variable",
                message=f"block {block_name!r} has no member {member!r}",
            )
        case Elim():
            return _infer_elim(ctx, t, fuel, strict)
    raise CheckError(kind="not-a-function", message=f"cannot infer {t!r}")


def _infer_elim(ctx: Context, e: Elim, fuel: Fuel, strict: bool) -> Term:
    block = ctx.lookup_block(e.block)
    if block is None:
        raise CheckError(kind="unbound-variable", message=f"unknown block {e.block!r}")
    if block.member_kind(e.ind) != "ind":
        raise CheckError(
            kind="elim-motive-mismatch",
            message=f"{e.block}.{e.ind} is not an inductive type",
        )
    if len(e.motives) != len(block.inds):
        raise CheckError(
            kind="elim-motive-mismatch",
            message=f"expected {len(block.inds)} motives, got {len(e.motives)}",
        )
    if len(e.cases) != len(block.constrs):
        raise CheckError(
            kind="elim-case-mismatch",
            message=f"expected {len(block.constrs)} case-eliminators, got {len(e.cases)}",
        )

    # the shared result sort comes from the first motive
    first_tele, _ = open_telescope(block.ind_type(block.ind_names[0]))
    result_sort = _motive_result_sort(ctx, e.motives[0], len(first_tele) + 1, fuel)

    motive_by_ind: dict[str, Term] = {}
    for (d, d_type), motive in zip(block.inds, e.motives):
        expected = _expected_motive_type(e.block, d, d_type, result_sort)
        try:
            check(ctx, motive, expected, fuel, strict_app=strict)
        except CheckError as err:
            raise CheckError(
                kind="elim-motive-mismatch",
                message=f"motive for {d}: {err.message or err.kind}",
                expected=expected,
                actual=motive,
            ) from err
        motive_by_ind[d] = motive

    scrut_ty = _infer(ctx, e.scrutinee, fuel, strict)
    r = whnf(ctx, scrut_ty, fuel)
    head = r.head
    ok = (
        isinstance(head, IndRef)
        and head.member == e.ind
        and ctx.lookup_block(head.block) is not None
    )
    if ok and head.block != e.block:
        from .cumulativity import ind_leq

        ok = ind_leq(ctx, ctx.lookup_block(head.block), block, fuel)
    if not ok:
        raise CheckError(
            kind="app-mismatch",
            message=f"scrutinee does not have inductive type {e.block}.{e.ind}",
            expected=IndRef(e.block, e.ind),
            actual=scrut_ty,
        )

    for (c, c_type), case_fn in zip(block.constrs, e.cases):
        qualified = qualify_members(e.block, block, c_type)
        expected = elim_type(
            e.block, block, motive_by_ind, IndRef(e.block, c), qualified
        )
        try:
            check(ctx, case_fn, expected, fuel, strict_app=strict)
        except CheckError as err:
            raise CheckError(
                kind="elim-case-mismatch",
                message=f"case-eliminator for {c}: {err.message or err.kind}",
                expected=expected,
                actual=case_fn,
            ) from err

    return App(mk_app(motive_by_ind[e.ind], r.spine), e.scrutinee)


def _motive_result_sort(ctx: Context, motive: Term, binders: int, fuel: Fuel) -> Sort:
    ty = infer(ctx, motive, fuel)
    for _ in range(binders):
        r = whnf(ctx, ty, fuel)
        if not isinstance(r.head, Pi) or r.spine:
            raise CheckError(
                kind="elim-motive-mismatch",
                message="motive takes too few arguments",
                actual=ty,
            )
        ty = open_term(r.head.codomain, Var(fresh_name("x")))
    r = whnf(ctx, ty, fuel)
    if isinstance(r.head, SortT) and not r.spine:
        return r.head.sort
    raise CheckError(
        kind="elim-motive-mismatch",
        message="motive does not end in a sort",
        actual=ty,
    )


def _expected_motive_type(
    block_name: str, d: str, d_type: Term, result_sort: Sort
) -> Term:
    """forall xs:Ts, d xs -> s' where the inductive type is forall xs:Ts, s."""
    binders, _ = open_telescope(d_type)
    applied = mk_app(IndRef(block_name, d), [Var(x) for x, _ in binders])
    tail: Term = Pi("_", applied, SortT(result_sort))
    for x, dom in reversed(binders):
        tail = Pi(x, dom, close_term(tail, x))
    return tail


def check(
    ctx: Context,
    t: Term,
    expected: Term,
    fuel=None,
    strict_app: bool = False,
) -> None:
    """Subsumption: `t` checks against `expected` when its inferred type is
    a subtype of it."""
    fuel = as_fuel(fuel)
    actual = infer(ctx, t, fuel, strict_app=strict_app)
    verdict = subtype(ctx, actual, expected, fuel)
    if verdict.holds:
        return
    ra = whnf(ctx, actual, fuel)
    re = whnf(ctx, expected, fuel)
    if (
        isinstance(ra.head, SortT)
        and isinstance(re.head, SortT)
        and not ra.spine
        and not re.spine
    ):
        raise CheckError(
            kind="universe-inconsistency",
            message=verdict.reason or "universe constraint violated",
            expected=expected,
            actual=actual,
        )
    raise CheckError(
        kind="app-mismatch",
        message=verdict.reason or "type mismatch",
        expected=expected,
        actual=actual,
    )
