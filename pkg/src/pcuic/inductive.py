"""Well-formedness of mutual inductive blocks, strict positivity, and the
eliminator machinery (case-eliminator types and recursor unfolding).

Inside a stored block, occurrences of the block's own inductive types are
plain `Var`s.  `qualify_members` rewrites them to global `IndRef`s; the
eliminator machinery below operates on such qualified constructor types.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .errors import CheckError, InternalError
from .syntax import (
    App,
    Bound,
    Context,
    Elim,
    Hyp,
    IndRef,
    InductiveBlock,
    Lam,
    Pi,
    Prop,
    SortT,
    Term,
    Var,
    app_spine,
    close_telescope,
    close_term,
    free_vars,
    fresh_name,
    mk_app,
    open_telescope,
    open_term,
    subst,
    uses_bound,
)


@dataclass(frozen=True)
class TelescopeView:
    """A type split into its first parameters and the remaining tail; the
    binders are opened with fresh variables.  `renest()` reproduces a term
    alpha-equal to the original."""

    params: tuple[tuple[str, Term], ...]
    tail: Term

    def renest(self) -> Term:
        return close_telescope(list(self.params), self.tail)


def split_params(t: Term, n: int) -> Optional[TelescopeView]:
    """View the first `n` binders of a member type; None if too few."""
    binders, tail = open_telescope(t, n, base="p")
    if len(binders) < n:
        return None
    return TelescopeView(tuple(binders), tail)


def strip_all_pis(t: Term) -> tuple[list[tuple[str, Term]], Term]:
    return open_telescope(t)


# ---------------------------------------------------------------------------
# ConstrsOf


def _conclusion_head(ctype: Term) -> tuple[Term, tuple[Term, ...]]:
    _, tail = open_telescope(ctype)
    return app_spine(tail)


def constrs_of(constrs: Sequence[tuple[str, Term]], d: str) -> list[str]:
    """Constructors whose conclusion (after stripping all binders) is the
    inductive type `d` applied to arguments."""
    out = []
    for name, ctype in constrs:
        head, _ = _conclusion_head(ctype)
        if head == Var(d):
            out.append(name)
    return out


# ---------------------------------------------------------------------------
# Strict positivity

# Rule selection is ordered, mirroring the recipe used by the eliminator
# machinery: a Pi whose domain mentions the block gets the recursive-argument
# rule, any other Pi the plain rule, and a block-headed application ends the
# recursion.


def _mentions(names: frozenset[str], t: Term) -> bool:
    return bool(names & free_vars(t))


def strict_pos_arg(names: frozenset[str], t: Term) -> bool:
    """The argument-position rule: forall ys:Ys, D ws with D in the block
    and no block type occurring in Ys or ws."""
    while isinstance(t, Pi):
        if _mentions(names, t.domain):
            return False
        t = open_term(t.codomain, Var(fresh_name("y")))
    head, args = app_spine(t)
    if not (isinstance(head, Var) and head.name in names):
        return False
    return not any(_mentions(names, a) for a in args)


def strict_pos(names: frozenset[str], t: Term) -> bool:
    """Strict positivity of a (constructor) type with respect to the set of
    inductive-type names `names`."""
    if isinstance(t, Pi):
        if _mentions(names, t.domain):
            # recursive argument: domain must satisfy the argument rule and
            # the codomain must not depend on the binder (P -> B)
            if not strict_pos_arg(names, t.domain):
                return False
            if uses_bound(t.codomain):
                return False
            return strict_pos(names, open_term(t.codomain, Var(fresh_name("x"))))
        return strict_pos(names, open_term(t.codomain, Var(fresh_name("x"))))
    head, args = app_spine(t)
    if isinstance(head, Var) and head.name in names:
        return not any(_mentions(names, a) for a in args)
    return False


# ---------------------------------------------------------------------------
# Block well-formedness


def qualify_members(block_name: str, block: InductiveBlock, t: Term) -> Term:
    """Replace the block's inductive-type variables with global references."""
    names = list(block.ind_names)
    return subst(t, names, [IndRef(block_name, d) for d in names])


def _block_error(sub_kind: str, member: str, message: str) -> CheckError:
    return CheckError(
        kind="block-ill-formed", sub_kind=sub_kind, member=member, message=message
    )


def check_block_wf(ctx: Context, block_name: str, block: InductiveBlock) -> None:
    """All side conditions for appending the block to `ctx`, checked in
    order; raises a structured error naming the offending member."""
    from . import typecheck  # deferred: typecheck depends on this module

    members = block.ind_names + block.constr_names
    seen: set[str] = set()
    for name in members:
        if name in seen:
            raise _block_error("duplicate-name", name, "member name repeated")
        seen.add(name)
    if not block.inds:
        raise _block_error("arity-shape", block_name, "block declares no inductive type")

    n = block.param_count
    views: dict[str, TelescopeView] = {}
    reference: Optional[TelescopeView] = None
    reference_raw: Optional[Term] = None
    for name, mtype in block.inds + block.constrs:
        view = split_params(mtype, n)
        if view is None:
            raise _block_error(
                "parameter-telescope", name, f"type has fewer than {n} leading binders"
            )
        views[name] = view
        if reference is None:
            reference, reference_raw = view, mtype
        else:
            # the shared telescope is a syntactic side condition: compare the
            # raw nested prefixes structurally (binder names are ignored)
            assert reference_raw is not None
            if not _same_param_prefix(reference_raw, mtype, n):
                raise _block_error(
                    "parameter-telescope",
                    name,
                    "parameter telescope differs from the block's first member",
                )

    ind_names = frozenset(block.ind_names)
    target: dict[str, str] = {}
    for name, _ctype in block.constrs:
        view = views[name]
        _, conclusion = strip_all_pis(view.tail)
        head, args = app_spine(conclusion)
        if not (isinstance(head, Var) and head.name in ind_names):
            raise _block_error(
                "constructor-target",
                name,
                "constructor must conclude in an inductive type of the block",
            )
        target[name] = head.name
        param_vars = tuple(Var(p) for p, _ in view.params)
        if tuple(args[:n]) != param_vars:
            raise _block_error(
                "parametricity",
                name,
                "constructor conclusion must pass the parameters through verbatim",
            )

    sorts: list = []
    for name, _ in block.inds:
        _, tail = strip_all_pis(views[name].renest())
        if not isinstance(tail, SortT):
            raise _block_error("arity-shape", name, "inductive type must end in a sort")
        if isinstance(tail.sort, Prop):
            raise _block_error(
                "arity-sort-prop", name, "inductive types in Prop are not supported"
            )
        sorts.append(tail.sort)
    if any(s != sorts[0] for s in sorts):
        raise _block_error(
            "mixed-sorts",
            block.ind_names[0],
            "all inductive types of a block must share one sort",
        )

    for name, ctype in block.constrs:
        if not strict_pos(ind_names, ctype):
            raise _block_error(
                "strict-positivity",
                name,
                "inductive types of the block occur non-strictly-positively",
            )

    # Typing premises: each inductive type has a sort in ctx; each
    # constructor type has the sort of its target inductive under ctx
    # extended with the inductive types as hypotheses.
    for name, mtype in block.inds:
        try:
            typecheck.sort_of(ctx, mtype)
        except CheckError as err:
            raise _block_error("member-typing", name, str(err)) from err
    ctx_inds = ctx
    for dname, dtype in block.inds:
        ctx_inds = ctx_inds.push(Hyp(dname, dtype))
    for name, ctype in block.constrs:
        # The sort condition applies inside the parameter context: the
        # stripped constructor type must have the sort of its target
        # inductive (quantifying over the parameters themselves may of
        # course live higher).
        d_sort = sorts[block.ind_index(target[name])]
        try:
            typecheck.sort_of(ctx_inds, ctype)
            view = views[name]
            inner = ctx_inds
            for p, p_ty in view.params:
                inner = inner.push(Hyp(p, p_ty))
            typecheck.check(inner, view.tail, SortT(d_sort))
        except CheckError as err:
            raise _block_error("member-typing", name, str(err)) from err


def _same_param_prefix(a: Term, b: Term, n: int) -> bool:
    for _ in range(n):
        if not (isinstance(a, Pi) and isinstance(b, Pi)):
            return False
        if a.domain != b.domain:
            return False
        a, b = a.codomain, b.codomain
    return True


# ---------------------------------------------------------------------------
# Eliminator typing and recursor unfolding
#
# Both walk a qualified constructor type by the ordered clauses: the
# recursive-argument clause first, then the plain binder clause, and the
# conclusion clause last.


def mentions_block_ind(block_name: str, ind_names: frozenset[str], t: Term) -> bool:
    """Whether a qualified reference to one of the block's inductive types
    occurs anywhere in `t`."""
    match t:
        case IndRef(b, m):
            return b == block_name and m in ind_names
        case Var() | Bound() | SortT():
            return False
        case Pi(_, d, c):
            return mentions_block_ind(block_name, ind_names, d) or mentions_block_ind(
                block_name, ind_names, c
            )
        case Lam(_, d, b):
            return mentions_block_ind(block_name, ind_names, d) or mentions_block_ind(
                block_name, ind_names, b
            )
        case App(f, a):
            return mentions_block_ind(block_name, ind_names, f) or mentions_block_ind(
                block_name, ind_names, a
            )
        case Elim(s, _, _, ms, cs):
            return (
                mentions_block_ind(block_name, ind_names, s)
                or any(mentions_block_ind(block_name, ind_names, m) for m in ms)
                or any(mentions_block_ind(block_name, ind_names, c) for c in cs)
            )
        case _:
            parts = []
            if hasattr(t, "definiens"):
                parts = [t.definiens, t.annotation, t.body]
            return any(mentions_block_ind(block_name, ind_names, p) for p in parts)


def _recursive_view(
    block_name: str, block: InductiveBlock, domain: Term
) -> Optional[tuple[list[tuple[str, Term]], str, tuple[Term, ...]]]:
    """If `domain` mentions the block, it must be `forall ys:Ys, d ws` with
    `d` inductive in the block and no block occurrence in Ys or ws; returns
    the opened `ys` binders, `d` and `ws`, or None for a plain binder."""
    ind_names = frozenset(block.ind_names)
    if not mentions_block_ind(block_name, ind_names, domain):
        return None
    binders, tail = open_telescope(domain, base="y")
    head, args = app_spine(tail)
    ok = (
        isinstance(head, IndRef)
        and head.block == block_name
        and block.member_kind(head.member) == "ind"
        and not any(mentions_block_ind(block_name, ind_names, d) for _, d in binders)
        and not any(mentions_block_ind(block_name, ind_names, a) for a in args)
    )
    if not ok:
        raise InternalError("recursive argument is not strictly positive")
    return binders, head.member, args


def elim_type(
    block_name: str,
    block: InductiveBlock,
    motives: Mapping[str, Term],
    head: Term,
    ctype: Term,
) -> Term:
    """The type of the case-eliminator for a constructor with (qualified)
    type `ctype`, accumulating the constructed term in `head`."""
    if isinstance(ctype, Pi):
        rec = _recursive_view(block_name, block, ctype.domain)
        if rec is not None:
            ys, d, ws = rec
            if uses_bound(ctype.codomain):
                raise InternalError("recursive argument with dependent codomain")
            p = fresh_name(ctype.name if ctype.name != "_" else "p")
            cod = open_term(ctype.codomain, Var(p))
            applied = mk_app(Var(p), [Var(y) for y, _ in ys])
            hyp = close_telescope(ys, mk_app(motives[d], list(ws) + [applied]))
            rest = elim_type(block_name, block, motives, App(head, Var(p)), cod)
            return Pi(ctype.name, ctype.domain, close_term(Pi("_", hyp, rest), p))
        x = fresh_name(ctype.name if ctype.name != "_" else "x")
        cod = open_term(ctype.codomain, Var(x))
        rest = elim_type(block_name, block, motives, App(head, Var(x)), cod)
        return Pi(ctype.name, ctype.domain, close_term(rest, x))
    head_t, args = app_spine(ctype)
    if isinstance(head_t, IndRef) and head_t.block == block_name:
        d = head_t.member
        if block.member_kind(d) == "ind":
            return mk_app(motives[d], list(args) + [head])
    raise InternalError(f"elim_type: malformed constructor type {ctype!r}")


def rec_unfold(
    block_name: str,
    block: InductiveBlock,
    motives: Sequence[Term],
    case_fns: Sequence[Term],
    f: Term,
    args: Sequence[Term],
    ctype: Term,
) -> Term:
    """One iota step: apply the constructor's arguments to the matching
    case-eliminator, inserting an elimination of each recursive argument
    right after it."""
    args = list(args)
    if isinstance(ctype, Pi):
        if not args:
            raise InternalError("rec_unfold: too few constructor arguments")
        b = args.pop(0)
        cod = open_term(ctype.codomain, b)
        rec = _recursive_view(block_name, block, ctype.domain)
        if rec is None:
            return rec_unfold(
                block_name, block, motives, case_fns, App(f, b), args, cod
            )
        ys, d, _ = rec
        sub_elim: Term = Elim(
            mk_app(b, [Var(y) for y, _ in ys]),
            block_name,
            d,
            tuple(motives),
            tuple(case_fns),
        )
        for y, dom in reversed(ys):
            sub_elim = Lam(y, dom, close_term(sub_elim, y))
        return rec_unfold(
            block_name, block, motives, case_fns, App(App(f, b), sub_elim), args, cod
        )
    if args:
        raise InternalError("rec_unfold: too many constructor arguments")
    return f
