"""Desk-scale executable set-theoretic semantics.

Inductive types are interpreted as least fixpoints of finite rule sets,
iterated Kleene-style with an explicit constructor-depth bound; eliminators
are interpreted through a second rule set over (element, result) pairs.
Trace encoding (`encode`/`decode`) models function spaces where the
impredicativity of Prop matters.

The evaluator covers an explicitly finite fragment: parameters must be
instantiated to finite sets, quantification over Prop is not interpreted,
and anything outside the fragment raises `FragmentError` rather than
approximating silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import InternalError, KernelError
from .syntax import (
    Context,
    Def,
    Elim,
    IndRef,
    InductiveBlock,
    Lam,
    LetIn,
    Pi,
    Prop,
    SortT,
    Term,
    Var,
    app_spine,
    fresh_name,
    open_telescope,
    open_term,
)


class FragmentError(KernelError):
    """The requested interpretation falls outside the finite fragment."""


class DepthExhausted(KernelError):
    """The depth bound is too small to contain the requested element."""


# ---------------------------------------------------------------------------
# Set values


@dataclass(frozen=True)
class Fin:
    """A finite set."""

    elems: frozenset = frozenset()

    def __iter__(self):
        return iter(self.elems)

    def __len__(self) -> int:
        return len(self.elems)


@dataclass(frozen=True)
class Tup:
    """An ordered tuple."""

    items: tuple = ()


@dataclass(frozen=True)
class Tag:
    """A tagged tuple; used for constructor values `<k; args>` and block
    elements `<i; params; indices; constructor-value>`."""

    tag: int
    items: tuple = ()


@dataclass(frozen=True)
class Graph:
    """A finite function graph, applied by lookup.  Single-valued by
    construction."""

    pairs: frozenset = frozenset()

    def __post_init__(self) -> None:
        keys = [k for k, _ in self.pairs]
        if len(keys) != len(set(keys)):
            raise ValueError("function graph is not single-valued")

    def apply(self, x):
        for k, v in self.pairs:
            if k == x:
                return v
        raise FragmentError(f"graph is undefined at {pretty_value(x)}")


SetValue = Union[Fin, Tup, Tag, Graph]


def fin(elems: Iterable) -> Fin:
    return Fin(frozenset(elems))


EMPTY = Fin()


def vn(k: int) -> Fin:
    """The von Neumann natural k: {vn(0), ..., vn(k-1)}."""
    out = EMPTY
    below: list[Fin] = []
    for _ in range(k):
        below.append(out)
        out = fin(below)
    return out


def graph_of(mapping: Mapping) -> Graph:
    return Graph(frozenset(mapping.items()))


# ---------------------------------------------------------------------------
# Trace encoding


def encode(pairs: Union[Graph, Iterable[tuple]]) -> Fin:
    """Trace-encode a function whose values are finite sets:
    union over (x, y) of {x} x y."""
    items = pairs.pairs if isinstance(pairs, Graph) else list(pairs)
    keys = [k for k, _ in items]
    if len(keys) != len(set(keys)):
        raise ValueError("encode: graph is not single-valued")
    out = set()
    for x, y in items:
        if not isinstance(y, Fin):
            raise ValueError("encode: function values must be finite sets")
        for e in y:
            out.add(Tup((x, e)))
    return fin(out)


def decode(f: Fin, x) -> Fin:
    """Apply a trace-encoded function: { y | (x, y) in f }."""
    return fin(p.items[1] for p in f if isinstance(p, Tup) and len(p.items) == 2 and p.items[0] == x)


def decode_star(v, args: Sequence) -> SetValue:
    """Vector application; with no arguments this is the identity, so plain
    values serve as zero-argument functions."""
    for a in args:
        if isinstance(v, Graph):
            v = v.apply(a)
        elif isinstance(v, Fin):
            v = decode(v, a)
        else:
            raise FragmentError("cannot apply a non-function value")
    return v


def encoded_dep_fun_space(dom: Fin, fiber: Mapping) -> Fin:
    """{ encode(f) | f in (dependent) function space over `dom` }, the
    trace-encoded dependent-function space used to model Prop.  Fiber
    elements must themselves be finite sets (as in the Prop model, where
    they are subsets of 1)."""
    choices: list[list[tuple]] = []
    for x in sorted(dom, key=pretty_value):
        b = fiber[x]
        if not isinstance(b, Fin):
            raise ValueError("fibers must be finite sets")
        choices.append([(x, y) for y in b])
    spaces: list[list[tuple]] = [[]]
    for options in choices:
        spaces = [f + [pair] for f in spaces for pair in options]
    return fin(encode(f) for f in spaces)


# ---------------------------------------------------------------------------
# Rule sets and Kleene stages


@dataclass(frozen=True)
class Rule:
    premises: frozenset
    conclusion: SetValue


@dataclass(frozen=True)
class RuleSet:
    rules: frozenset = frozenset()


@dataclass(frozen=True)
class Stages:
    """Iteration stages of the conclusion-collecting operator; `closed` is
    set when a fixpoint was reached before the stage bound."""

    stages: tuple[frozenset, ...]
    closed: bool

    @property
    def final(self) -> frozenset:
        return self.stages[-1]


def phi(rule_set: RuleSet, current: frozenset) -> frozenset:
    """All conclusions whose premises are available in `current`."""
    return frozenset(
        r.conclusion for r in rule_set.rules if r.premises <= current
    )


def lfp_stages(rule_set: RuleSet, max_stage: int) -> Stages:
    """Stages 0..max_stage of the monotone iteration, truncated at the
    first repeated stage; for a finite rule set a repeated stage IS the
    least fixpoint."""
    stages: list[frozenset] = [frozenset()]
    for _ in range(max_stage):
        nxt = stages[-1] | phi(rule_set, stages[-1])
        if nxt == stages[-1]:
            return Stages(tuple(stages), True)
        stages.append(nxt)
    closed = phi(rule_set, stages[-1]) <= stages[-1]
    return Stages(tuple(stages), closed)


# ---------------------------------------------------------------------------
# Fragment environment


@dataclass
class FragmentEnv:
    """Finite data the oracle may quantify over: a kernel context for block
    lookup and definitions, named finite enumerations, and the finite sets
    standing in for sort-typed binders (parameter instantiations)."""

    ctx: Context
    enums: dict[str, SetValue] = field(default_factory=dict)
    sort_pool: tuple[Fin, ...] = ()
    depth: int = 6
    _cache: dict = field(default_factory=dict)


@dataclass
class BlockInterp:
    """The finite truncation of a block's rule-set fixpoint."""

    block_name: str
    block: InductiveBlock
    param_values: tuple
    depth: int
    elements: frozenset
    element_depth: dict
    stages: Stages
    rule_set: RuleSet

    def type_elements(self, ind_name: str, index_values: Sequence = ()) -> Fin:
        """Constructor values inhabiting `ind_name` at the given indices."""
        i = self.block.ind_index(ind_name)
        idx = Tup(tuple(index_values))
        return fin(
            e.items[2]
            for e in self.elements
            if e.tag == i and e.items[1] == idx
        )

    def all_ctor_values(self, ind_name: str) -> Fin:
        i = self.block.ind_index(ind_name)
        return fin(e.items[2] for e in self.elements if e.tag == i)

    def element_for(self, ind_name: str, ctor_value) -> Optional[Tag]:
        i = self.block.ind_index(ind_name)
        found = [
            e for e in self.elements if e.tag == i and e.items[2] == ctor_value
        ]
        if len(found) > 1:
            raise InternalError("index uniqueness violated")
        return found[0] if found else None


def _element(ind_idx: int, params: Sequence, indices: Sequence, ctor) -> Tag:
    return Tag(ind_idx, (Tup(tuple(params)), Tup(tuple(indices)), ctor))


# ---------------------------------------------------------------------------
# Interpreting inductive blocks


@dataclass(frozen=True)
class _ArgSpec:
    """One constructor argument: either plain (evaluate the domain to a
    finite set) or recursive (`forall ys:Ys, d qs ws`)."""

    binder: str
    domain: Term
    recursive: Optional[tuple] = None  # (ind_name, ys, q_terms, w_terms)


def _constructor_specs(
    block_name: str, block: InductiveBlock
) -> list[tuple[str, str, list[_ArgSpec], tuple[str, ...], tuple[Term, ...], list[tuple[str, Term]]]]:
    """Per constructor: name, target inductive, argument specs, parameter
    binder names, conclusion index terms, parameter binders."""
    ind_names = frozenset(block.ind_names)
    out = []
    for cname, ctype in block.constrs:
        params, rest = open_telescope(ctype, block.param_count, base="p")
        specs: list[_ArgSpec] = []
        t = rest
        while isinstance(t, Pi):
            x = fresh_name(t.name if t.name != "_" else "x")
            domain = t.domain
            rec = None
            if ind_names & _member_vars(domain, ind_names):
                ys, tail = open_telescope(domain, base="y")
                head, args = app_spine(tail)
                if not (isinstance(head, Var) and head.name in ind_names):
                    raise FragmentError(
                        f"constructor {cname!r}: unsupported recursive argument shape"
                    )
                qs = args[: block.param_count]
                ws = args[block.param_count :]
                rec = (head.name, ys, qs, ws)
            specs.append(_ArgSpec(x, domain, rec))
            t = open_term(t.codomain, Var(x))
        head, args = app_spine(t)
        assert isinstance(head, Var) and head.name in ind_names
        out.append(
            (
                cname,
                head.name,
                specs,
                tuple(p for p, _ in params),
                tuple(args[block.param_count :]),
                params,
            )
        )
    return out


def _member_vars(t: Term, names: frozenset) -> frozenset:
    from .syntax import free_vars

    return frozenset(free_vars(t)) & names


def interp_block(
    env: FragmentEnv,
    block_name: str,
    block: InductiveBlock,
    param_values: Sequence,
    depth: int,
) -> BlockInterp:
    """Interpret a block at one parameter instantiation: saturate the
    element universe up to constructor depth `depth`, materialize the rule
    set truncated to that universe, and run the Kleene stages (which must
    reproduce the universe)."""
    key = (block_name, block, tuple(param_values), depth)
    if key in env._cache:
        return env._cache[key]
    if len(param_values) != block.param_count:
        raise FragmentError(
            f"block {block_name!r} expects {block.param_count} parameter values"
        )
    specs = _constructor_specs(block_name, block)

    elements: set[Tag] = set()
    element_depth: dict[Tag, int] = {}
    by_key: dict[tuple, list[Tag]] = {}

    def register(e: Tag, d: int) -> None:
        if e in elements:
            element_depth[e] = min(element_depth[e], d)
            return
        elements.add(e)
        element_depth[e] = d
        by_key.setdefault((e.tag, e.items[0]), []).append(e)

    changed = True
    while changed:
        changed = False
        for cname, target, argspecs, pnames, index_terms, pbinders in specs:
            k = block.constr_index(cname)
            i = block.ind_index(target)
            base_env = dict(zip(pnames, param_values))
            for args, subdepth in _enumerate_args(
                env, block, block_name, param_values, argspecs, base_env,
                elements, element_depth, depth,
            ):
                d = 1 + subdepth
                if d > depth:
                    continue
                venv = dict(base_env)
                for spec, value in zip(argspecs, args):
                    venv[spec.binder] = value
                indices = tuple(eval_value(env, t, venv) for t in index_terms)
                ctor = Tag(k, tuple(param_values) + tuple(args))
                e = _element(i, param_values, indices, ctor)
                if e not in elements:
                    changed = True
                register(e, d)

    rules = _materialize_rules(env, block, block_name, param_values, specs, elements)
    stages = lfp_stages(rules, depth + 1)
    if stages.final != frozenset(elements):
        raise InternalError("rule-set fixpoint disagrees with saturation")
    # index uniqueness: the indices are determined by the constructor value
    seen: dict[tuple, Tup] = {}
    for e in elements:
        key2 = (e.tag, e.items[0], e.items[2])
        if key2 in seen and seen[key2] != e.items[1]:
            raise InternalError("index uniqueness violated")
        seen[key2] = e.items[1]
    bi = BlockInterp(
        block_name,
        block,
        tuple(param_values),
        depth,
        frozenset(elements),
        element_depth,
        stages,
        RuleSet(frozenset(rules.rules)),
    )
    env._cache[key] = bi
    return bi


def _enumerate_args(
    env: FragmentEnv,
    block: InductiveBlock,
    block_name: str,
    param_values: Sequence,
    argspecs: Sequence[_ArgSpec],
    base_env: dict,
    elements: set,
    element_depth: dict,
    depth: int,
):
    """Yield (argument values, max recursive sub-depth) tuples, binding
    each chosen value before evaluating later argument domains."""

    def go(idx: int, venv: dict, chosen: list, subdepth: int):
        if idx == len(argspecs):
            yield list(chosen), subdepth
            return
        spec = argspecs[idx]
        if spec.recursive is None:
            dom = eval_value(env, spec.domain, venv)
            if not isinstance(dom, Fin):
                raise FragmentError(
                    f"argument domain is not a finite set: {spec.domain!r}"
                )
            for v in sorted(dom, key=pretty_value):
                venv2 = dict(venv)
                venv2[spec.binder] = v
                yield from go(idx + 1, venv2, chosen + [v], subdepth)
            return
        ind_name, ys, qs, ws = spec.recursive
        i = block.ind_index(ind_name)
        q_vals = tuple(eval_value(env, q, venv) for q in qs)
        if q_vals != tuple(param_values):
            raise FragmentError(
                "recursive occurrence at different parameters is outside the fragment"
            )
        candidates = [
            e for e in elements if e.tag == i and e.items[0] == Tup(q_vals)
        ]
        if not ys:
            for e in candidates:
                venv2 = dict(venv)
                venv2[spec.binder] = e.items[2]
                yield from go(
                    idx + 1, venv2, chosen + [e.items[2]],
                    max(subdepth, element_depth[e]),
                )
            return
        # function-embedded recursion: enumerate finite graphs over the
        # (non-recursive) ys domains
        y_domains = []
        for yname, ydom in ys:
            d = eval_value(env, ydom, venv)
            if not isinstance(d, Fin):
                raise FragmentError("recursive argument domain is not finite")
            y_domains.append((yname, sorted(d, key=pretty_value)))
        keys: list[tuple] = [()]
        for _, dom_vals in y_domains:
            keys = [k + (v,) for k in keys for v in dom_vals]
        if len(candidates) ** len(keys) > 4096:
            raise FragmentError("function-embedded recursion is too large")

        def build(assigns: dict, remaining: list[tuple]):
            if not remaining:
                g = _curried_graph(assigns, list(keys))
                dmax = max(
                    (element_depth[assigns[k]] for k in keys), default=0
                )
                yield g, dmax
                return
            key0 = remaining[0]
            for e in candidates:
                assigns[key0] = e
                yield from build(assigns, remaining[1:])
            assigns.pop(key0, None)

        for g, dmax in build({}, list(keys)):
            venv2 = dict(venv)
            venv2[spec.binder] = g
            yield from go(idx + 1, venv2, chosen + [g], max(subdepth, dmax))

    yield from go(0, dict(base_env), [], 0)


def _curried_graph(assigns: Mapping[tuple, Tag], keys: list[tuple]) -> SetValue:
    """Build a curried Graph from tuple-keyed assignments to elements."""
    if keys and len(keys[0]) == 0:
        return assigns[()].items[2]
    first_parts = sorted({k[0] for k in keys}, key=pretty_value)
    out = {}
    for p in first_parts:
        rest = [k[1:] for k in keys if k[0] == p]
        sub = {k[1:]: assigns[k] for k in keys if k[0] == p}
        out[p] = _curried_graph(sub, rest)
    return graph_of(out)


def _materialize_rules(
    env: FragmentEnv,
    block: InductiveBlock,
    block_name: str,
    param_values: Sequence,
    specs,
    elements: set,
) -> RuleSet:
    by_value = _by_value_index(elements)
    rules = set()
    for e in elements:
        premises = _premises_of(env, block, param_values, specs, e, by_value)
        rules.add(Rule(frozenset(premises), e))
    return RuleSet(frozenset(rules))


def _premises_of(env, block, param_values, specs, e: Tag, by_value) -> list:
    ctor = e.items[2]
    cname = block.constr_names[ctor.tag]
    spec = next(s for s in specs if s[0] == cname)
    _, _, argspecs, pnames, _, _ = spec
    args = ctor.items[block.param_count :]
    premises = []
    for aspec, value in zip(argspecs, args):
        if aspec.recursive is None:
            continue
        ind_name, ys, _, _ = aspec.recursive
        i = block.ind_index(ind_name)
        if not ys:
            premises.extend(_unique_element(by_value, i, value))
        else:
            for sub in _graph_leaves(value):
                premises.extend(_unique_element(by_value, i, sub))
    return premises


def _unique_element(by_value, ind_idx: int, ctor_value) -> list:
    found = by_value.get((ind_idx, ctor_value), [])
    if len(found) != 1:
        raise InternalError("recursive argument does not match a unique element")
    return found


def _graph_leaves(g) -> list:
    if not isinstance(g, Graph):
        return [g]
    out = []
    for _, v in g.pairs:
        out.extend(_graph_leaves(v))
    return out


# ---------------------------------------------------------------------------
# Interpreting eliminators


def interp_elim(
    env: FragmentEnv,
    block_name: str,
    block: InductiveBlock,
    motives: Optional[Sequence],
    case_fns: Sequence,
    scrutinee: Tag,
    depth: int,
) -> SetValue:
    """The unique result paired with `scrutinee` in the eliminator rule-set
    fixpoint.  `motives` are typing data and are not consumed by the
    computation; `case_fns` holds one value per constructor (a Graph, or a
    plain value for argumentless constructors)."""
    if len(case_fns) != len(block.constrs):
        raise FragmentError("one case value per constructor is required")
    if not isinstance(scrutinee, Tag):
        raise FragmentError("scrutinee must be a constructor value")
    param_values = tuple(scrutinee.items[: block.param_count])
    bi = interp_block(env, block_name, block, param_values, depth)
    specs = _constructor_specs(block_name, block)
    by_value = _by_value_index(bi.elements)

    target = [e for e in bi.elements if e.items[2] == scrutinee]
    if not target:
        raise DepthExhausted(
            f"scrutinee is not in the depth-{depth} truncation"
        )

    # the scrutinee's derivation cone: truncation artifacts outside it are
    # tolerated, inside it they are real errors
    needed: set[Tag] = set()
    frontier = list(target)
    while frontier:
        e = frontier.pop()
        if e in needed:
            continue
        needed.add(e)
        frontier.extend(_premises_of(env, block, param_values, specs, e, by_value))

    results: dict[Tag, SetValue] = {}
    ordered = sorted(
        bi.elements, key=lambda e: (bi.element_depth[e], pretty_value(e))
    )
    for e in ordered:
        ctor = e.items[2]
        cname = block.constr_names[ctor.tag]
        _, _, argspecs, _, _, _ = next(s for s in specs if s[0] == cname)
        args = ctor.items[block.param_count :]
        try:
            applied: list = list(param_values)
            for aspec, value in zip(argspecs, args):
                applied.append(value)
                if aspec.recursive is None:
                    continue
                _, ys, _, _ = aspec.recursive
                if not ys:
                    applied.append(results[value])
                else:
                    applied.append(_map_graph_leaves(value, results))
            results[ctor] = decode_star(case_fns[ctor.tag], applied)
        except (FragmentError, KeyError):
            if e in needed:
                raise
            continue

    rules = set()
    for e in bi.elements:
        ctor = e.items[2]
        if ctor not in results:
            continue
        prem_elems = _premises_of(env, block, param_values, specs, e, by_value)
        if any(p.items[2] not in results for p in prem_elems):
            continue
        premises = frozenset(
            Tup((p.items[2], results[p.items[2]])) for p in prem_elems
        )
        rules.add(Rule(premises, Tup((ctor, results[ctor]))))
    stages = lfp_stages(RuleSet(frozenset(rules)), depth + 1)
    matches = [
        p.items[1]
        for p in stages.final
        if isinstance(p, Tup) and p.items[0] == scrutinee
    ]
    if not matches:
        raise DepthExhausted(
            f"no eliminator value for scrutinee at depth {depth}"
        )
    if len(matches) > 1:
        raise InternalError("eliminator fixpoint is not single-valued")
    return matches[0]


def _by_value_index(elements):
    by_value: dict[tuple, list[Tag]] = {}
    for e in elements:
        by_value.setdefault((e.tag, e.items[2]), []).append(e)
    return by_value


def _map_graph_leaves(g, results: Mapping):
    if not isinstance(g, Graph):
        return results[g]
    return graph_of({k: _map_graph_leaves(v, results) for k, v in g.pairs})


# ---------------------------------------------------------------------------
# Fragment evaluation of terms


def eval_value(
    env: FragmentEnv,
    t: Term,
    venv: Optional[Mapping[str, SetValue]] = None,
    depth: Optional[int] = None,
) -> SetValue:
    """Evaluate a term of the finite fragment to a set value.  Lambdas
    become finite graphs, inductive types become their truncated element
    sets, constructors become tagged tuples, and eliminators run through
    `interp_elim`."""
    venv = dict(venv or {})
    depth = env.depth if depth is None else depth
    return _eval(env, t, venv, depth)


def _eval(env: FragmentEnv, t: Term, venv: dict, depth: int) -> SetValue:
    """Call-by-value evaluation: lambdas applied to arguments bind the
    argument value directly; a lambda is tabulated into a graph only where
    its value is needed as data (case values, arguments, results)."""
    head, args = app_spine(t)
    arg_terms = list(args)
    while True:
        if isinstance(head, Lam) and arg_terms:
            x = fresh_name(head.name)
            venv = dict(venv)
            venv[x] = _eval(env, arg_terms.pop(0), venv, depth)
            head = open_term(head.body, Var(x))
            h2, a2 = app_spine(head)
            head, arg_terms = h2, list(a2) + arg_terms
            continue
        if isinstance(head, LetIn):
            x = fresh_name(head.name)
            venv = dict(venv)
            venv[x] = _eval(env, head.definiens, venv, depth)
            head = open_term(head.body, Var(x))
            h2, a2 = app_spine(head)
            head, arg_terms = h2, list(a2) + arg_terms
            continue
        if isinstance(head, Var) and head.name not in venv and head.name not in env.enums:
            entry = env.ctx.lookup(head.name)
            if isinstance(entry, Def):
                h2, a2 = app_spine(entry.body)
                head, arg_terms = h2, list(a2) + arg_terms
                continue
        break

    match head:
        case Var(x):
            if x in venv:
                base = venv[x]
            elif x in env.enums:
                base = env.enums[x]
            else:
                raise FragmentError(f"no finite interpretation for variable {x!r}")
        case SortT():
            raise FragmentError("sorts are not interpreted in the fragment")
        case Pi():
            base = _fun_space(env, head, venv, depth)
        case Lam(name, dom, body):
            # tabulation points whose body falls outside the truncation are
            # omitted; applying the graph there still fails loudly
            values = _domain_values(env, dom, venv, depth)
            x = fresh_name(name)
            out = {}
            for v in values:
                venv2 = dict(venv)
                venv2[x] = v
                try:
                    out[v] = _eval(env, open_term(body, Var(x)), venv2, depth)
                except (FragmentError, DepthExhausted):
                    continue
            base = graph_of(out)
        case IndRef():
            return _eval_indref(env, head, arg_terms, venv, depth)
        case Elim(scrut, block_name, _, _, cases):
            block = env.ctx.lookup_block(block_name)
            if block is None:
                raise FragmentError(f"unknown block {block_name!r}")
            s = _eval(env, scrut, venv, depth)
            case_vals = tuple(_eval(env, c, venv, depth) for c in cases)
            base = interp_elim(env, block_name, block, None, case_vals, s, depth)
        case _:
            raise FragmentError(f"term is outside the fragment: {head!r}")
    return decode_star(base, [_eval(env, a, venv, depth) for a in arg_terms])


def _domain_values(env: FragmentEnv, dom: Term, venv: dict, depth: int) -> list:
    """The values a binder of type `dom` ranges over: sort-typed binders
    range over the declared parameter instantiations."""
    if isinstance(dom, SortT):
        if isinstance(dom.sort, Prop):
            raise FragmentError("quantification over Prop is outside the fragment")
        if not env.sort_pool:
            raise FragmentError(
                "sort-typed binder needs declared instantiations (sort_pool)"
            )
        return list(env.sort_pool)
    v = _eval(env, dom, venv, depth)
    if not isinstance(v, Fin):
        raise FragmentError(f"binder domain is not a finite set: {dom!r}")
    return sorted(v, key=pretty_value)


def _fun_space(env: FragmentEnv, t: Pi, venv: dict, depth: int) -> Fin:
    """Non-dependent function spaces over finite sets, enumerated as
    graphs; kept small by a hard cap."""
    from .syntax import uses_bound

    if uses_bound(t.codomain):
        raise FragmentError("dependent function spaces are outside the fragment")
    dom = _eval(env, t.domain, venv, depth)
    cod = _eval(env, open_term(t.codomain, Var(fresh_name("x"))), venv, depth)
    if not isinstance(dom, Fin) or not isinstance(cod, Fin):
        raise FragmentError("function space over non-finite sets")
    if len(cod) ** max(len(dom), 1) > 4096:
        raise FragmentError("function space is too large to enumerate")
    spaces: list[dict] = [{}]
    for x in sorted(dom, key=pretty_value):
        nxt = []
        for f in spaces:
            for y in cod:
                g = dict(f)
                g[x] = y
                nxt.append(g)
        spaces = nxt
    return fin(graph_of(f) for f in spaces)


def _eval_indref(
    env: FragmentEnv, ref: IndRef, args: Sequence[Term], venv: dict, depth: int
) -> SetValue:
    block = env.ctx.lookup_block(ref.block)
    if block is None:
        raise FragmentError(f"unknown block {ref.block!r}")
    arg_vals = [_eval(env, a, venv, depth) for a in args]
    kind = block.member_kind(ref.member)
    if kind not in ("ind", "constr"):
        raise FragmentError(f"block {ref.block!r} has no member {ref.member!r}")
    return _apply_indref(env, ref, list(arg_vals), venv, depth)


def _binder_count(t: Term) -> int:
    n = 0
    while isinstance(t, Pi):
        n += 1
        t = t.codomain
    return n


def _apply_indref(env, ref: IndRef, arg_vals: list, venv: dict, depth: int) -> SetValue:
    """A fully applied inductive type yields its element set, a fully
    applied constructor its tagged tuple; partial applications become
    graphs over the remaining argument domains."""
    from .inductive import qualify_members

    block = env.ctx.lookup_block(ref.block)
    kind = block.member_kind(ref.member)
    mtype = (
        block.ind_type(ref.member) if kind == "ind" else block.constr_type(ref.member)
    )
    total = _binder_count(mtype)
    if len(arg_vals) < total:
        t = qualify_members(ref.block, block, mtype)
        for _ in arg_vals:
            t = open_term(t.codomain, Var(fresh_name("a")))
        values = _domain_values(env, t.domain, venv, depth)
        return graph_of(
            {v: _apply_indref(env, ref, arg_vals + [v], venv, depth) for v in values}
        )
    if kind == "ind":
        params = tuple(arg_vals[: block.param_count])
        indices = tuple(arg_vals[block.param_count :])
        bi = interp_block(env, ref.block, block, params, depth)
        return bi.type_elements(ref.member, indices)
    return Tag(block.constr_index(ref.member), tuple(arg_vals))


# ---------------------------------------------------------------------------
# Embedding normal forms and pretty values


def embed_normal(env: FragmentEnv, t: Term, depth: Optional[int] = None) -> SetValue:
    """Embed a closed normal form into set values: constructor applications
    become tagged tuples (type-level arguments are evaluated), lambdas are
    evaluated to graphs."""
    depth = env.depth if depth is None else depth
    head, args = app_spine(t)
    if isinstance(head, IndRef):
        block = env.ctx.lookup_block(head.block)
        if block is not None and block.member_kind(head.member) == "constr":
            from .inductive import qualify_members

            ctype = qualify_members(head.block, block, block.constr_type(head.member))
            if len(args) != _binder_count(ctype):
                raise FragmentError("constructor application is not saturated")
            out = []
            ty = ctype
            for a in args:
                assert isinstance(ty, Pi)
                if isinstance(ty.domain, SortT):
                    out.append(eval_value(env, a, {}, depth))
                else:
                    out.append(embed_normal(env, a, depth))
                ty = open_term(ty.codomain, Var(fresh_name("a")))
            return Tag(block.constr_index(head.member), tuple(out))
        if block is not None and block.member_kind(head.member) == "ind":
            return eval_value(env, t, {}, depth)
    if isinstance(head, Lam) and not args:
        return eval_value(env, t, {}, depth)
    raise FragmentError(f"cannot embed normal form {t!r}")


def as_numeral(v: SetValue) -> Optional[int]:
    """Recognize unary numeral chains Tag(k0, ()) / Tag(k1, (prev,))."""
    n = 0
    while isinstance(v, Tag) and len(v.items) == 1:
        n += 1
        v = v.items[0]
    if isinstance(v, Tag) and len(v.items) == 0:
        return n
    return None


def pretty_value(v: SetValue) -> str:
    num = as_numeral(v) if isinstance(v, Tag) else None
    if num is not None:
        return str(num)
    match v:
        case Fin(elems):
            inner = ", ".join(sorted(pretty_value(e) for e in elems))
            return "{" + inner + "}"
        case Tup(items):
            return "(" + "; ".join(pretty_value(x) for x in items) + ")"
        case Tag(tag, items):
            inner = "; ".join(pretty_value(x) for x in items)
            return f"<{tag}{'; ' if inner else ''}{inner}>"
        case Graph(pairs):
            inner = ", ".join(
                sorted(f"{pretty_value(k)}=>{pretty_value(w)}" for k, w in pairs)
            )
            return "[" + inner + "]"
    return repr(v)
