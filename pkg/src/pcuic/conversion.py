"""Judgemental equality decided by reduction.

`whnf` performs beta (application of a lambda), delta (context
definitions), zeta (let) and iota (eliminator on a constructor-headed
scrutinee) steps at the head; `conv` compares weak-head normal forms
structurally, eta-expanding when a lambda faces a neutral term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .errors import FuelExhausted
from .inductive import qualify_members, rec_unfold
from .syntax import (
    App,
    Context,
    Def,
    Elim,
    Hyp,
    IndRef,
    Lam,
    LetIn,
    Pi,
    SortT,
    Term,
    Var,
    fresh_name,
    mk_app,
    open_term,
)

#: Default head-step budget; the theory proves no normalization bound, so
#: reduction must fail gracefully on adversarial input.
DEFAULT_FUEL = 1_000_000


class Fuel:
    """A shared, mutable step budget threaded through one checking task."""

    __slots__ = ("remaining",)

    def __init__(self, remaining: int = DEFAULT_FUEL) -> None:
        self.remaining = remaining

    def tick(self) -> None:
        self.remaining -= 1
        if self.remaining < 0:
            raise FuelExhausted()


def as_fuel(fuel: Union[int, Fuel, None]) -> Fuel:
    if isinstance(fuel, Fuel):
        return fuel
    return Fuel(DEFAULT_FUEL if fuel is None else fuel)


@dataclass(frozen=True)
class WhnfResult:
    """A weak-head normal form: `mk_app(head, spine)` is a reduct of the
    input and `head` is not itself a top-level redex."""

    head: Term
    spine: tuple[Term, ...]

    def term(self) -> Term:
        return mk_app(self.head, self.spine)


def whnf(ctx: Context, t: Term, fuel: Union[int, Fuel, None] = None) -> WhnfResult:
    fuel = as_fuel(fuel)
    head = t
    stack: list[Term] = []
    while True:
        match head:
            case App(f, a):
                stack.append(a)
                head = f
            case Lam(_, _, body) if stack:
                fuel.tick()
                head = open_term(body, stack.pop())
            case LetIn(_, definiens, _, body):
                fuel.tick()
                head = open_term(body, definiens)
            case Var(x):
                entry = ctx.lookup(x)
                if isinstance(entry, Def):
                    fuel.tick()
                    head = entry.body
                else:
                    break
            case Elim():
                step = _iota_step(ctx, head, fuel)
                if step is None:
                    break
                fuel.tick()
                head = step
            case _:
                break
    return WhnfResult(head, tuple(reversed(stack)))


def _iota_step(ctx: Context, e: Elim, fuel: Fuel) -> Optional[Term]:
    """Rewrite an eliminator whose scrutinee reduces to a constructor of a
    block included in the eliminator's block; None when blocked."""
    from .cumulativity import ind_leq  # deferred: mutual with this module

    s = whnf(ctx, e.scrutinee, fuel)
    if not isinstance(s.head, IndRef):
        return None
    sblock = ctx.lookup_block(s.head.block)
    block = ctx.lookup_block(e.block)
    if sblock is None or block is None:
        return None
    if sblock.member_kind(s.head.member) != "constr":
        return None
    cname = s.head.member
    if block.member_kind(cname) != "constr":
        return None
    if s.head.block != e.block and not ind_leq(ctx, sblock, block, fuel):
        return None
    ctype = qualify_members(e.block, block, block.constr_type(cname))
    n_binders = _binder_count(ctype)
    if len(s.spine) != n_binders:
        return None
    case_fn = e.cases[block.constr_index(cname)]
    return rec_unfold(
        e.block, block, e.motives, e.cases, case_fn, s.spine, ctype
    )


def iota_blocked_reason(ctx: Context, e: Elim, fuel: Union[int, Fuel, None] = None) -> Optional[str]:
    """Why an eliminator does not iota-reduce: distinguishes a scrutinee
    that is not a constructor from a constructor of an unrelated block."""
    from .cumulativity import ind_leq

    fuel = as_fuel(fuel)
    s = whnf(ctx, e.scrutinee, fuel)
    if not isinstance(s.head, IndRef):
        return "not-a-constructor"
    sblock = ctx.lookup_block(s.head.block)
    if sblock is None or sblock.member_kind(s.head.member) != "constr":
        return "not-a-constructor"
    block = ctx.lookup_block(e.block)
    if block is None:
        return "unknown-block"
    if s.head.block != e.block and not ind_leq(ctx, sblock, block, fuel):
        return "constructor-of-unrelated-block"
    return None


def _binder_count(t: Term) -> int:
    n = 0
    while isinstance(t, Pi):
        n += 1
        t = t.codomain
    return n


def normalize(ctx: Context, t: Term, fuel: Union[int, Fuel, None] = None) -> Term:
    """Full normal form: no beta/delta/zeta/iota redex remains, including
    under binders.  Eta is not applied; the comparator handles it."""
    fuel = as_fuel(fuel)
    r = whnf(ctx, t, fuel)
    spine = tuple(normalize(ctx, a, fuel) for a in r.spine)
    match r.head:
        case Lam(n, d, b):
            x = fresh_name(n)
            body = normalize(ctx.push(Hyp(x, d)), open_term(b, Var(x)), fuel)
            head: Term = Lam(n, normalize(ctx, d, fuel), _close(body, x))
        case Pi(n, d, c):
            x = fresh_name(n)
            cod = normalize(ctx.push(Hyp(x, d)), open_term(c, Var(x)), fuel)
            head = Pi(n, normalize(ctx, d, fuel), _close(cod, x))
        case Elim(s, blk, ind, ms, cs):
            head = Elim(
                normalize(ctx, s, fuel),
                blk,
                ind,
                tuple(normalize(ctx, m, fuel) for m in ms),
                tuple(normalize(ctx, c, fuel) for c in cs),
            )
        case _:
            head = r.head
    return mk_app(head, spine)


def _close(t: Term, name: str) -> Term:
    from .syntax import close_term

    return close_term(t, name)


def conv(
    ctx: Context, t: Term, u: Term, fuel: Union[int, Fuel, None] = None
) -> bool:
    """Judgemental equality, decided by weak-head reduction, structural
    comparison, and eta-expansion at function position."""
    fuel = as_fuel(fuel)
    return _conv(ctx, t, u, fuel)


def _conv(ctx: Context, t: Term, u: Term, fuel: Fuel) -> bool:
    if t == u:
        return True
    rt = whnf(ctx, t, fuel)
    ru = whnf(ctx, u, fuel)
    return _conv_whnf(ctx, rt, ru, fuel)


def _conv_spines(
    ctx: Context, xs: Sequence[Term], ys: Sequence[Term], fuel: Fuel
) -> bool:
    return len(xs) == len(ys) and all(
        _conv(ctx, a, b, fuel) for a, b in zip(xs, ys)
    )


def _conv_whnf(ctx: Context, rt: WhnfResult, ru: WhnfResult, fuel: Fuel) -> bool:
    a, b = rt.head, ru.head

    # eta: a lambda equals a term whose application to the bound variable
    # equals the lambda's body
    if isinstance(a, Lam) and not isinstance(b, Lam):
        x = fresh_name(a.name)
        inner = ctx.push(Hyp(x, a.domain))
        return _conv(inner, open_term(a.body, Var(x)), App(ru.term(), Var(x)), fuel)
    if isinstance(b, Lam) and not isinstance(a, Lam):
        x = fresh_name(b.name)
        inner = ctx.push(Hyp(x, b.domain))
        return _conv(inner, App(rt.term(), Var(x)), open_term(b.body, Var(x)), fuel)

    match (a, b):
        case (SortT(s1), SortT(s2)):
            return s1 == s2 and not rt.spine and not ru.spine
        case (Var(x), Var(y)):
            return x == y and _conv_spines(ctx, rt.spine, ru.spine, fuel)
        case (Lam(_, d1, b1), Lam(_, d2, b2)):
            x = fresh_name("x")
            inner = ctx.push(Hyp(x, d1))
            return _conv(inner, open_term(b1, Var(x)), open_term(b2, Var(x)), fuel)
        case (Pi(_, d1, c1), Pi(_, d2, c2)):
            if rt.spine or ru.spine:  # applied products are ill-typed noise
                return False
            if not _conv(ctx, d1, d2, fuel):
                return False
            x = fresh_name("x")
            inner = ctx.push(Hyp(x, d1))
            return _conv(inner, open_term(c1, Var(x)), open_term(c2, Var(x)), fuel)
        case (IndRef(b1, m1), IndRef(b2, m2)):
            return _conv_ind(ctx, rt, ru, b1, m1, b2, m2, fuel)
        case (Elim(s1, blk1, i1, ms1, cs1), Elim(s2, blk2, i2, ms2, cs2)):
            return (
                blk1 == blk2
                and i1 == i2
                and _conv(ctx, s1, s2, fuel)
                and _conv_spines(ctx, ms1, ms2, fuel)
                and _conv_spines(ctx, cs1, cs2, fuel)
                and _conv_spines(ctx, rt.spine, ru.spine, fuel)
            )
        case _:
            return False


def _conv_ind(
    ctx: Context,
    rt: WhnfResult,
    ru: WhnfResult,
    b1: str,
    m1: str,
    b2: str,
    m2: str,
    fuel: Fuel,
) -> bool:
    from .cumulativity import fully_applied, ind_leq

    if m1 != m2:
        return False
    if b1 == b2:
        return _conv_spines(ctx, rt.spine, ru.spine, fuel)
    blk1 = ctx.lookup_block(b1)
    blk2 = ctx.lookup_block(b2)
    if blk1 is None or blk2 is None:
        return False
    kind = blk1.member_kind(m1)
    if kind is None or blk2.member_kind(m2) != kind:
        return False
    if not _conv_spines(ctx, rt.spine, ru.spine, fuel):
        return False
    if not (
        fully_applied(blk1, m1, len(rt.spine))
        and fully_applied(blk2, m2, len(ru.spine))
    ):
        return False
    if kind == "ind":
        # inductive-type equality needs inclusion both ways
        return ind_leq(ctx, blk1, blk2, fuel) and ind_leq(ctx, blk2, blk1, fuel)
    # constructors are equal when either block includes the other
    return ind_leq(ctx, blk1, blk2, fuel) or ind_leq(ctx, blk2, blk1, fuel)
