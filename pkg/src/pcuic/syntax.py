"""Core term and context representation.

Terms are locally nameless: variables bound by an enclosing binder are
positional (`Bound`, a de Bruijn index), while context references are named
(`Var`).  Binder names are kept only as printing hints and are excluded from
equality, so alpha-equivalent terms are structurally identical and
substitution is capture-avoiding by construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .errors import InternalError

# ---------------------------------------------------------------------------
# Sorts


@dataclass(frozen=True)
class Prop:
    def __repr__(self) -> str:
        return "Prop"


@dataclass(frozen=True)
class Univ:
    """The predicative universe Type at a concrete non-negative level."""

    level: int

    def __post_init__(self) -> None:
        if self.level < 0:
            raise ValueError("universe level must be non-negative")

    def __repr__(self) -> str:
        return f"Type@{{{self.level}}}"


Sort = Union[Prop, Univ]

PROP = Prop()


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Var:
    """A named free variable, resolved against the context."""

    name: str


@dataclass(frozen=True)
class Bound:
    """A positional reference to an enclosing binder (0 = innermost)."""

    index: int


@dataclass(frozen=True)
class SortT:
    sort: Sort


@dataclass(frozen=True)
class Pi:
    name: str = field(compare=False)
    domain: "Term"
    codomain: "Term"


@dataclass(frozen=True)
class Lam:
    name: str = field(compare=False)
    domain: "Term"
    body: "Term"


@dataclass(frozen=True)
class LetIn:
    name: str = field(compare=False)
    definiens: "Term"
    annotation: "Term"
    body: "Term"


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class IndRef:
    """Reference to an inductive type or constructor of a named block."""

    block: str
    member: str


@dataclass(frozen=True)
class Elim:
    """Eliminator: one motive per inductive type of the block and one
    case-eliminator per constructor, both in declaration order."""

    scrutinee: "Term"
    block: str
    ind: str
    motives: tuple["Term", ...]
    cases: tuple["Term", ...]


Term = Union[Var, Bound, SortT, Pi, Lam, LetIn, App, IndRef, Elim]


# ---------------------------------------------------------------------------
# Inductive blocks and contexts


@dataclass(frozen=True)
class InductiveBlock:
    """A block of mutual inductive definitions sharing `param_count`
    parameters.  Inside the stored types, references to the block's own
    members are plain `Var`s; references to earlier blocks are `IndRef`s."""

    param_count: int
    inds: tuple[tuple[str, Term], ...]
    constrs: tuple[tuple[str, Term], ...]

    @property
    def ind_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.inds)

    @property
    def constr_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.constrs)

    def ind_type(self, name: str) -> Optional[Term]:
        for n, t in self.inds:
            if n == name:
                return t
        return None

    def constr_type(self, name: str) -> Optional[Term]:
        for n, t in self.constrs:
            if n == name:
                return t
        return None

    def constr_index(self, name: str) -> int:
        for i, (n, _) in enumerate(self.constrs):
            if n == name:
                return i
        raise InternalError(f"no constructor {name!r} in block")

    def ind_index(self, name: str) -> int:
        for i, (n, _) in enumerate(self.inds):
            if n == name:
                return i
        raise InternalError(f"no inductive type {name!r} in block")

    def member_kind(self, name: str) -> Optional[str]:
        if any(n == name for n, _ in self.inds):
            return "ind"
        if any(n == name for n, _ in self.constrs):
            return "constr"
        return None


@dataclass(frozen=True)
class Hyp:
    name: str
    type: Term


@dataclass(frozen=True)
class Def:
    name: str
    body: Term
    type: Term


@dataclass(frozen=True)
class BlockDecl:
    name: str
    block: InductiveBlock


ContextEntry = Union[Hyp, Def, BlockDecl]


@dataclass(frozen=True)
class Context:
    """Ordered telescope of hypotheses, definitions and named blocks.

    Block member names are not part of the context domain; blocks live in a
    separate namespace keyed by the block's own name.
    """

    entries: tuple[ContextEntry, ...] = ()

    def push(self, entry: ContextEntry) -> "Context":
        return Context(self.entries + (entry,))

    def lookup(self, name: str) -> Optional[Union[Hyp, Def]]:
        for entry in reversed(self.entries):
            if isinstance(entry, (Hyp, Def)) and entry.name == name:
                return entry
        return None

    def lookup_block(self, name: str) -> Optional[InductiveBlock]:
        for entry in reversed(self.entries):
            if isinstance(entry, BlockDecl) and entry.name == name:
                return entry.block
        return None

    def dom(self) -> tuple[str, ...]:
        return tuple(
            e.name for e in self.entries if isinstance(e, (Hyp, Def))
        )

    def block_names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.entries if isinstance(e, BlockDecl))

    def blocks(self) -> tuple[BlockDecl, ...]:
        return tuple(e for e in self.entries if isinstance(e, BlockDecl))

    def __len__(self) -> int:
        return len(self.entries)


# ---------------------------------------------------------------------------
# Fresh names and binder plumbing

_fresh_counter = itertools.count(1)


def fresh_name(base: str = "x") -> str:
    """A name no surface program can contain ('!' is not an identifier
    character), so opening binders can never capture user variables."""
    base = base.split("!", 1)[0]
    if not base or base == "_":
        base = "x"
    return f"{base}!{next(_fresh_counter)}"


def open_term(t: Term, value: Term, depth: int = 0) -> Term:
    """Instantiate the binder variable `Bound(depth)` with `value`.

    `value` must be locally closed (no dangling Bound), which holds for
    every term the checker substitutes in, so no index shifting is needed.
    """
    match t:
        case Bound(k):
            return value if k == depth else t
        case Var() | SortT() | IndRef():
            return t
        case Pi(n, d, c):
            return Pi(n, open_term(d, value, depth), open_term(c, value, depth + 1))
        case Lam(n, d, b):
            return Lam(n, open_term(d, value, depth), open_term(b, value, depth + 1))
        case LetIn(n, dfn, ann, b):
            return LetIn(
                n,
                open_term(dfn, value, depth),
                open_term(ann, value, depth),
                open_term(b, value, depth + 1),
            )
        case App(f, a):
            return App(open_term(f, value, depth), open_term(a, value, depth))
        case Elim(s, blk, ind, ms, cs):
            return Elim(
                open_term(s, value, depth),
                blk,
                ind,
                tuple(open_term(m, value, depth) for m in ms),
                tuple(open_term(c, value, depth) for c in cs),
            )
    raise InternalError(f"open_term: unexpected term {t!r}")


def close_term(t: Term, name: str, depth: int = 0) -> Term:
    """Abstract the free variable `name` as binder variable `Bound(depth)`."""
    match t:
        case Var(x):
            return Bound(depth) if x == name else t
        case Bound() | SortT() | IndRef():
            return t
        case Pi(n, d, c):
            return Pi(n, close_term(d, name, depth), close_term(c, name, depth + 1))
        case Lam(n, d, b):
            return Lam(n, close_term(d, name, depth), close_term(b, name, depth + 1))
        case LetIn(n, dfn, ann, b):
            return LetIn(
                n,
                close_term(dfn, name, depth),
                close_term(ann, name, depth),
                close_term(b, name, depth + 1),
            )
        case App(f, a):
            return App(close_term(f, name, depth), close_term(a, name, depth))
        case Elim(s, blk, ind, ms, cs):
            return Elim(
                close_term(s, name, depth),
                blk,
                ind,
                tuple(close_term(m, name, depth) for m in ms),
                tuple(close_term(c, name, depth) for c in cs),
            )
    raise InternalError(f"close_term: unexpected term {t!r}")


def uses_bound(t: Term, depth: int = 0) -> bool:
    """Whether `Bound(depth)` occurs in `t`."""
    match t:
        case Bound(k):
            return k == depth
        case Var() | SortT() | IndRef():
            return False
        case Pi(_, d, c):
            return uses_bound(d, depth) or uses_bound(c, depth + 1)
        case Lam(_, d, b):
            return uses_bound(d, depth) or uses_bound(b, depth + 1)
        case LetIn(_, dfn, ann, b):
            return (
                uses_bound(dfn, depth)
                or uses_bound(ann, depth)
                or uses_bound(b, depth + 1)
            )
        case App(f, a):
            return uses_bound(f, depth) or uses_bound(a, depth)
        case Elim(s, _, _, ms, cs):
            return (
                uses_bound(s, depth)
                or any(uses_bound(m, depth) for m in ms)
                or any(uses_bound(c, depth) for c in cs)
            )
    raise InternalError(f"uses_bound: unexpected term {t!r}")


# ---------------------------------------------------------------------------
# Free variables, substitution, alpha-equivalence


def free_vars(t: Union[Term, InductiveBlock]) -> frozenset[str]:
    """Free (named) variables of a term or inductive block."""
    if isinstance(t, InductiveBlock):
        out: frozenset[str] = frozenset()
        for _, ty in t.inds + t.constrs:
            out |= free_vars(ty)
        return out
    match t:
        case Var(x):
            return frozenset({x})
        case Bound() | SortT() | IndRef():
            return frozenset()
        case Pi(_, d, c):
            return free_vars(d) | free_vars(c)
        case Lam(_, d, b):
            return free_vars(d) | free_vars(b)
        case LetIn(_, dfn, ann, b):
            return free_vars(dfn) | free_vars(ann) | free_vars(b)
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case Elim(s, _, _, ms, cs):
            out = free_vars(s)
            for m in ms:
                out |= free_vars(m)
            for c in cs:
                out |= free_vars(c)
            return out
    raise InternalError(f"free_vars: unexpected term {t!r}")


def subst(t: Term, names: Sequence[str], values: Sequence[Term]) -> Term:
    """Simultaneous substitution of named variables.

    Binders are positional, so a surface binder that shadows one of `names`
    already dropped the pair when the term was built; no renaming happens
    here and capture is impossible.
    """
    if len(names) != len(values):
        raise ValueError("subst: names and values must have equal length")
    if len(set(names)) != len(names):
        raise ValueError("subst: names must be pairwise distinct")
    return _subst(t, dict(zip(names, values)))


def _subst(t: Term, m: dict[str, Term]) -> Term:
    if not m:
        return t
    match t:
        case Var(x):
            return m.get(x, t)
        case Bound() | SortT() | IndRef():
            return t
        case Pi(n, d, c):
            return Pi(n, _subst(d, m), _subst(c, m))
        case Lam(n, d, b):
            return Lam(n, _subst(d, m), _subst(b, m))
        case LetIn(n, dfn, ann, b):
            return LetIn(n, _subst(dfn, m), _subst(ann, m), _subst(b, m))
        case App(f, a):
            return App(_subst(f, m), _subst(a, m))
        case Elim(s, blk, ind, ms, cs):
            return Elim(
                _subst(s, m),
                blk,
                ind,
                tuple(_subst(x, m) for x in ms),
                tuple(_subst(x, m) for x in cs),
            )
    raise InternalError(f"subst: unexpected term {t!r}")


def subst1(t: Term, name: str, value: Term) -> Term:
    return subst(t, [name], [value])


def alpha_eq(t: Term, u: Term) -> bool:
    """Equality up to bound-variable renaming.

    Binder names do not participate in structural equality, so this is
    plain ``==``.
    """
    return t == u


# ---------------------------------------------------------------------------
# Application spines


def app_spine(t: Term) -> tuple[Term, tuple[Term, ...]]:
    """Decompose nested applications into (head, arguments)."""
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, tuple(args)


def mk_app(head: Term, args: Iterable[Term]) -> Term:
    for a in args:
        head = App(head, a)
    return head


def open_telescope(
    t: Term, count: Optional[int] = None, base: str = "x"
) -> tuple[list[tuple[str, Term]], Term]:
    """Peel up to `count` leading Pi binders (all of them when None),
    opening each with a fresh variable.  Returns the opened binder list
    and the opened tail."""
    binders: list[tuple[str, Term]] = []
    while isinstance(t, Pi) and (count is None or len(binders) < count):
        name = fresh_name(t.name if t.name != "_" else base)
        binders.append((name, t.domain))
        t = open_term(t.codomain, Var(name))
    return binders, t


def close_telescope(binders: Sequence[tuple[str, Term]], tail: Term) -> Term:
    """Re-nest opened binders around a tail, inverting open_telescope."""
    for name, domain in reversed(binders):
        tail = Pi(name, domain, close_term(tail, name))
    return tail


# ---------------------------------------------------------------------------
# Size measure (doubled so all values are integers)


def size(obj, ctx: Optional[Context] = None) -> int:
    """Structural size on a doubled scale: terms count 2 per node, the
    empty context counts 1, and a judgement (ctx, subject) pair counts
    ctx + subject - 1.  Block references count the referenced block's size
    when a context is supplied, else 2."""
    if isinstance(obj, Context):
        total = 1
        for entry in obj.entries:
            if isinstance(entry, Hyp):
                total += size(entry.type, ctx)
            elif isinstance(entry, Def):
                total += size(entry.body, ctx) + size(entry.type, ctx)
            else:
                total += size(entry.block, ctx)
        return total
    if isinstance(obj, InductiveBlock):
        total = 2
        for _, t in obj.inds + obj.constrs:
            total += size(t, ctx)
        return total
    if isinstance(obj, tuple) and len(obj) == 2 and isinstance(obj[0], Context):
        context, subject = obj
        resolver = ctx if ctx is not None else context
        return size(context, resolver) + size(subject, resolver) - 1
    return _term_size(obj, ctx)


def _block_ref_size(block_name: str, ctx: Optional[Context]) -> int:
    if ctx is not None:
        block = ctx.lookup_block(block_name)
        if block is not None:
            return size(block, ctx)
    return 2


def _term_size(t: Term, ctx: Optional[Context]) -> int:
    match t:
        case Var() | Bound() | SortT():
            return 2
        case Pi(_, d, c):
            return _term_size(d, ctx) + _term_size(c, ctx) + 2
        case Lam(_, d, b):
            return _term_size(d, ctx) + _term_size(b, ctx) + 2
        case LetIn(_, dfn, ann, b):
            return (
                _term_size(dfn, ctx)
                + _term_size(ann, ctx)
                + _term_size(b, ctx)
                + 2
            )
        case App(f, a):
            return _term_size(f, ctx) + _term_size(a, ctx) + 2
        case IndRef(blk, _):
            return _block_ref_size(blk, ctx)
        case Elim(s, blk, _, ms, cs):
            return (
                _term_size(s, ctx)
                + _block_ref_size(blk, ctx)
                + sum(_term_size(m, ctx) for m in ms)
                + sum(_term_size(c, ctx) for c in cs)
                + 2
            )
    raise InternalError(f"size: unexpected term {t!r}")
