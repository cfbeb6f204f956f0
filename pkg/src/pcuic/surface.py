"""Concrete syntax: a lexer/parser for `.pcuic` files and a printer.

The grammar is Coq-flavoured:

    decl := "axiom" IDENT ":" term "."
          | "def" IDENT ":" term ":=" term "."
          | "inductive" IDENT "params" NAT "{" sig (";" sig)* ":=" [sig (";" sig)*] "}" "."
          | "#check" term "." | "#eval" term "."
          | "#conv" term "==" term "." | "#sub" term "<=" term "."
    sig  := IDENT ":" term
    term := "Prop" | "Type@{" NAT "}" | "Set" | IDENT | IDENT "." IDENT
          | "forall" IDENT ":" term "," term
          | "fun" IDENT ":" term "=>" term
          | "let" IDENT ":=" term ":" term "in" term
          | term term | term "->" term
          | "Elim" "(" term ";" IDENT "." IDENT ";" termlist ";" termlist ")"

Comments are `(* ... *)` and nest.  `Set` is an alias for `Type@{0}`.
A qualified name `b.m` must be written without spaces around the dot.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import ParseError
from .syntax import (
    App,
    Bound,
    Context,
    Def,
    Elim,
    Hyp,
    IndRef,
    InductiveBlock,
    Lam,
    LetIn,
    Pi,
    PROP,
    Prop,
    SortT,
    Term,
    Univ,
    Var,
    app_spine,
    free_vars,
    open_term,
    uses_bound,
)

KEYWORDS = {
    "axiom",
    "def",
    "inductive",
    "params",
    "forall",
    "fun",
    "let",
    "in",
    "Prop",
    "Set",
    "Type",
    "Elim",
}

_PUNCT = (":=", "=>", "->", "==", "<=", "(", ")", "{", "}", ";", ",", ".", ":", "@")


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT | QIDENT | NAT | KW | PUNCT | DIRECTIVE | EOF
    text: str
    line: int
    column: int


def _is_ident_start(c: str) -> bool:
    return c.isalpha() or c == "_"


def _is_ident_char(c: str) -> bool:
    return c.isalnum() or c in "_'"


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def error(msg: str) -> ParseError:
        return ParseError(msg, line, col)

    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c.isspace():
            i, col = i + 1, col + 1
            continue
        if text.startswith("(*", i):
            depth, start_line, start_col = 1, line, col
            i, col = i + 2, col + 2
            while i < n and depth:
                if text.startswith("(*", i):
                    depth, i, col = depth + 1, i + 2, col + 2
                elif text.startswith("*)", i):
                    depth, i, col = depth - 1, i + 2, col + 2
                elif text[i] == "\n":
                    i, line, col = i + 1, line + 1, 1
                else:
                    i, col = i + 1, col + 1
            if depth:
                raise ParseError("unterminated comment", start_line, start_col)
            continue
        if c == "#":
            j = i + 1
            while j < n and _is_ident_char(text[j]):
                j += 1
            word = text[i:j]
            if word not in ("#check", "#eval", "#conv", "#sub"):
                raise error(f"unknown directive {word!r}")
            toks.append(Token("DIRECTIVE", word, line, col))
            col += j - i
            i = j
            continue
        if _is_ident_start(c):
            j = i + 1
            while j < n and _is_ident_char(text[j]):
                j += 1
            word = text[i:j]
            # qualified name: IDENT '.' IDENT with no intervening space
            if (
                j < n
                and text[j] == "."
                and j + 1 < n
                and _is_ident_start(text[j + 1])
                and word not in KEYWORDS
            ):
                k = j + 1
                while k < n and _is_ident_char(text[k]):
                    k += 1
                toks.append(Token("QIDENT", text[i:k], line, col))
                col += k - i
                i = k
                continue
            kind = "KW" if word in KEYWORDS else "IDENT"
            toks.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        if c.isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("NAT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                toks.append(Token("PUNCT", p, line, col))
                i += len(p)
                col += len(p)
                break
        else:
            raise error(f"unexpected character {c!r}")
    toks.append(Token("EOF", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# Surface declarations


@dataclass(frozen=True)
class AxiomDecl:
    name: str
    type: Term
    span: tuple[int, int]


@dataclass(frozen=True)
class DefDecl:
    name: str
    type: Term
    body: Term
    span: tuple[int, int]


@dataclass(frozen=True)
class InductiveDecl:
    name: str
    block: InductiveBlock
    span: tuple[int, int]


@dataclass(frozen=True)
class CheckDecl:
    term: Term
    span: tuple[int, int]


@dataclass(frozen=True)
class EvalDecl:
    term: Term
    span: tuple[int, int]


@dataclass(frozen=True)
class ConvDecl:
    lhs: Term
    rhs: Term
    span: tuple[int, int]


@dataclass(frozen=True)
class SubDecl:
    lhs: Term
    rhs: Term
    span: tuple[int, int]


Decl = Union[AxiomDecl, DefDecl, InductiveDecl, CheckDecl, EvalDecl, ConvDecl, SubDecl]


@dataclass(frozen=True)
class SourceFile:
    decls: tuple[Decl, ...]


class _Scope:
    """Name resolution: later declarations may reference earlier names only."""

    def __init__(self, ctx: Optional[Context] = None) -> None:
        self.globals: set[str] = set()
        self.blocks: dict[str, set[str]] = {}
        self.member_owner: dict[str, list[str]] = {}
        if ctx is not None:
            self.globals.update(ctx.dom())
            for bd in ctx.blocks():
                self._add_block(bd.name, set(bd.block.ind_names) | set(bd.block.constr_names))

    def _add_block(self, name: str, members: set[str]) -> None:
        self.blocks[name] = members
        for m in members:
            self.member_owner.setdefault(m, []).append(name)


class Parser:
    def __init__(self, text: str, scope: Optional[_Scope] = None) -> None:
        self.toks = tokenize(text)
        self.pos = 0
        self.scope = scope or _Scope()

    # -- token plumbing ------------------------------------------------

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def error(self, msg: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(msg, tok.line, tok.column)

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            raise self.error(f"expected {want!r}, found {tok.text or tok.kind!r}")
        return self.next()

    def at_punct(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "PUNCT" and tok.text == text

    def at_kw(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "KW" and tok.text == text

    # -- names ---------------------------------------------------------

    def resolve(self, name: str, binders: list[str], tok: Token) -> Term:
        if name != "_":
            for depth, b in enumerate(reversed(binders)):
                if b == name:
                    return Bound(depth)
        if name in self.scope.globals:
            return Var(name)
        owners = self.scope.member_owner.get(name, [])
        if len(owners) == 1:
            return IndRef(owners[0], name)
        if len(owners) > 1:
            raise ParseError(
                f"ambiguous name {name!r} (a member of blocks {', '.join(owners)}); qualify it",
                tok.line,
                tok.column,
            )
        raise ParseError(f"unknown identifier {name!r}", tok.line, tok.column)

    def resolve_qualified(self, text: str, tok: Token) -> tuple[str, str]:
        block, member = text.split(".", 1)
        members = self.scope.blocks.get(block)
        if members is None:
            raise ParseError(f"unknown block {block!r}", tok.line, tok.column)
        if member not in members:
            raise ParseError(
                f"block {block!r} has no member {member!r}", tok.line, tok.column
            )
        return block, member

    # -- terms -----------------------------------------------------------

    def parse_term(self, binders: list[str]) -> Term:
        tok = self.peek()
        if tok.kind == "KW" and tok.text == "forall":
            self.next()
            name = self.expect_binder_name()
            self.expect("PUNCT", ":")
            domain = self.parse_term(binders)
            self.expect("PUNCT", ",")
            body = self.parse_term(binders + [name])
            return Pi(name, domain, body)
        if tok.kind == "KW" and tok.text == "fun":
            self.next()
            name = self.expect_binder_name()
            self.expect("PUNCT", ":")
            domain = self.parse_term(binders)
            self.expect("PUNCT", "=>")
            body = self.parse_term(binders + [name])
            return Lam(name, domain, body)
        if tok.kind == "KW" and tok.text == "let":
            self.next()
            name = self.expect_binder_name()
            self.expect("PUNCT", ":=")
            definiens = self.parse_term(binders)
            self.expect("PUNCT", ":")
            annotation = self.parse_term(binders)
            self.expect("KW", "in")
            body = self.parse_term(binders + [name])
            return LetIn(name, definiens, annotation, body)
        left = self.parse_app(binders)
        if self.at_punct("->"):
            self.next()
            right = self.parse_term(binders + ["_"])
            return Pi("_", left, right)
        return left

    def expect_binder_name(self) -> str:
        tok = self.peek()
        if tok.kind != "IDENT":
            raise self.error("expected a binder name")
        return self.next().text

    def parse_app(self, binders: list[str]) -> Term:
        head = self.parse_atom(binders)
        while self._at_atom_start():
            head = App(head, self.parse_atom(binders))
        return head

    def _at_atom_start(self) -> bool:
        tok = self.peek()
        if tok.kind in ("IDENT", "QIDENT"):
            return True
        if tok.kind == "KW" and tok.text in ("Prop", "Set", "Type", "Elim"):
            return True
        return tok.kind == "PUNCT" and tok.text == "("

    def parse_atom(self, binders: list[str]) -> Term:
        tok = self.peek()
        if tok.kind == "KW" and tok.text == "Prop":
            self.next()
            return SortT(PROP)
        if tok.kind == "KW" and tok.text == "Set":
            self.next()
            return SortT(Univ(0))
        if tok.kind == "KW" and tok.text == "Type":
            self.next()
            self.expect("PUNCT", "@")
            self.expect("PUNCT", "{")
            level = int(self.expect("NAT").text)
            self.expect("PUNCT", "}")
            return SortT(Univ(level))
        if tok.kind == "KW" and tok.text == "Elim":
            return self.parse_elim(binders)
        if tok.kind == "IDENT":
            self.next()
            return self.resolve(tok.text, binders, tok)
        if tok.kind == "QIDENT":
            self.next()
            block, member = self.resolve_qualified(tok.text, tok)
            return IndRef(block, member)
        if tok.kind == "PUNCT" and tok.text == "(":
            self.next()
            inner = self.parse_term(binders)
            self.expect("PUNCT", ")")
            return inner
        raise self.error(f"expected a term, found {tok.text or tok.kind!r}")

    def parse_elim(self, binders: list[str]) -> Term:
        self.expect("KW", "Elim")
        self.expect("PUNCT", "(")
        scrutinee = self.parse_term(binders)
        self.expect("PUNCT", ";")
        tok = self.peek()
        if tok.kind == "QIDENT":
            self.next()
            block, member = self.resolve_qualified(tok.text, tok)
        elif tok.kind == "IDENT":
            self.next()
            owners = self.scope.member_owner.get(tok.text, [])
            if len(owners) != 1:
                raise ParseError(
                    f"cannot resolve eliminated inductive {tok.text!r}; qualify it",
                    tok.line,
                    tok.column,
                )
            block, member = owners[0], tok.text
        else:
            raise self.error("expected the eliminated inductive type, block.name")
        if member not in self.scope.blocks.get(block, set()):
            raise ParseError(
                f"block {block!r} has no member {member!r}", tok.line, tok.column
            )
        self.expect("PUNCT", ";")
        motives = self.parse_termlist(binders)
        self.expect("PUNCT", ";")
        cases = self.parse_termlist(binders)
        self.expect("PUNCT", ")")
        return Elim(scrutinee, block, member, tuple(motives), tuple(cases))

    def parse_termlist(self, binders: list[str]) -> list[Term]:
        if self.at_punct(";") or self.at_punct(")"):
            return []
        out = [self.parse_term(binders)]
        while self.at_punct(","):
            self.next()
            out.append(self.parse_term(binders))
        return out

    # -- declarations ----------------------------------------------------

    def parse_sig(self, binders: list[str]) -> tuple[str, Term]:
        name = self.expect("IDENT").text
        self.expect("PUNCT", ":")
        return name, self.parse_term(binders)

    def parse_file(self) -> SourceFile:
        decls: list[Decl] = []
        while self.peek().kind != "EOF":
            decls.append(self.parse_decl())
        return SourceFile(tuple(decls))

    def parse_decl(self) -> Decl:
        tok = self.peek()
        span = (tok.line, tok.column)
        if tok.kind == "KW" and tok.text == "axiom":
            self.next()
            name = self.expect("IDENT").text
            self._check_fresh(name, tok)
            self.expect("PUNCT", ":")
            ty = self.parse_term([])
            self.expect("PUNCT", ".")
            self.scope.globals.add(name)
            return AxiomDecl(name, ty, span)
        if tok.kind == "KW" and tok.text == "def":
            self.next()
            name = self.expect("IDENT").text
            self._check_fresh(name, tok)
            self.expect("PUNCT", ":")
            ty = self.parse_term([])
            self.expect("PUNCT", ":=")
            body = self.parse_term([])
            self.expect("PUNCT", ".")
            self.scope.globals.add(name)
            return DefDecl(name, ty, body, span)
        if tok.kind == "KW" and tok.text == "inductive":
            return self.parse_inductive(span)
        if tok.kind == "DIRECTIVE":
            self.next()
            if tok.text == "#check":
                t = self.parse_term([])
                self.expect("PUNCT", ".")
                return CheckDecl(t, span)
            if tok.text == "#eval":
                t = self.parse_term([])
                self.expect("PUNCT", ".")
                return EvalDecl(t, span)
            if tok.text == "#conv":
                lhs = self.parse_term([])
                self.expect("PUNCT", "==")
                rhs = self.parse_term([])
                self.expect("PUNCT", ".")
                return ConvDecl(lhs, rhs, span)
            lhs = self.parse_term([])
            self.expect("PUNCT", "<=")
            rhs = self.parse_term([])
            self.expect("PUNCT", ".")
            return SubDecl(lhs, rhs, span)
        raise self.error(f"expected a declaration, found {tok.text or tok.kind!r}")

    def _check_fresh(self, name: str, tok: Token) -> None:
        if name in self.scope.globals or name in self.scope.blocks:
            raise ParseError(f"name {name!r} is already declared", tok.line, tok.column)

    def parse_inductive(self, span: tuple[int, int]) -> InductiveDecl:
        self.expect("KW", "inductive")
        name_tok = self.peek()
        block_name = self.expect("IDENT").text
        self._check_fresh(block_name, name_tok)
        self.expect("KW", "params")
        param_count = int(self.expect("NAT").text)
        self.expect("PUNCT", "{")
        # Same-block member names resolve to plain Vars inside the block
        # body; they shadow earlier globals and members while parsing it.
        saved_globals = set(self.scope.globals)
        inds: list[tuple[str, Term]] = []
        while True:
            sig_name, sig_ty = self.parse_sig([])
            inds.append((sig_name, sig_ty))
            self.scope.globals.add(sig_name)
            if self.at_punct(";"):
                self.next()
                continue
            break
        self.expect("PUNCT", ":=")
        constrs: list[tuple[str, Term]] = []
        if not self.at_punct("}"):
            while True:
                sig_name, sig_ty = self.parse_sig([])
                constrs.append((sig_name, sig_ty))
                if self.at_punct(";"):
                    self.next()
                    continue
                break
        self.expect("PUNCT", "}")
        self.expect("PUNCT", ".")
        self.scope.globals = saved_globals
        block = InductiveBlock(param_count, tuple(inds), tuple(constrs))
        self.scope._add_block(block_name, set(block.ind_names) | set(block.constr_names))
        return InductiveDecl(block_name, block, span)


def parse(text: Union[str, bytes]) -> SourceFile:
    """Parse a whole source file; raises ParseError with a position."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return Parser(text).parse_file()


def parse_term(text: Union[str, bytes], ctx: Optional[Context] = None) -> Term:
    """Parse a single term, resolving names against an existing context."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    p = Parser(text, _Scope(ctx))
    t = p.parse_term([])
    p.expect("EOF")
    return t


# ---------------------------------------------------------------------------
# Printer

_PREC_TERM = 0
_PREC_ARROW_LEFT = 1
_PREC_APP = 2
_PREC_ATOM = 3


def _pretty_binder(hint: str, avoid: set[str]) -> str:
    base = hint.split("!", 1)[0] or "x"
    if base == "_":
        base = "x"
    name = base
    while name in avoid or name in KEYWORDS or "!" in name:
        name += "'"
    return name


def print_term(t: Term, scope: Optional[list[str]] = None) -> str:
    """Render a term; `parse_term(print_term(t))` is alpha-equal to `t`."""
    return _pt(t, scope or [], _PREC_TERM)


def _pt(t: Term, scope: list[str], prec: int) -> str:
    match t:
        case SortT(s):
            return "Prop" if isinstance(s, Prop) else f"Type@{{{s.level}}}"
        case Var(x):
            return x
        case Bound(k):
            if k < len(scope):
                return scope[-1 - k]
            return f"?b{k}"  # dangling index: diagnostic output only
        case IndRef(block, member):
            return f"{block}.{member}"
        case App():
            head, args = app_spine(t)
            inner = " ".join(
                [_pt(head, scope, _PREC_APP)] + [_pt(a, scope, _PREC_ATOM) for a in args]
            )
            return _wrap(inner, prec > _PREC_APP)
        case Pi(hint, domain, codomain):
            if not uses_bound(codomain):
                left = _pt(domain, scope, _PREC_ARROW_LEFT + 1)
                right = _pt(open_term(codomain, Var("_")), scope + ["_"], _PREC_ARROW_LEFT)
                return _wrap(f"{left} -> {right}", prec > _PREC_ARROW_LEFT)
            name = _pretty_binder(hint, _avoid(codomain, scope))
            body = _pt(open_term(codomain, Var(name)), scope + [name], _PREC_TERM)
            left = _pt(domain, scope, _PREC_TERM)
            return _wrap(f"forall {name} : {left}, {body}", prec > _PREC_TERM)
        case Lam(hint, domain, body):
            name = _pretty_binder(hint, _avoid(body, scope))
            body_s = _pt(open_term(body, Var(name)), scope + [name], _PREC_TERM)
            dom_s = _pt(domain, scope, _PREC_TERM)
            return _wrap(f"fun {name} : {dom_s} => {body_s}", prec > _PREC_TERM)
        case LetIn(hint, definiens, annotation, body):
            name = _pretty_binder(hint, _avoid(body, scope))
            d = _pt(definiens, scope, _PREC_ARROW_LEFT)
            a = _pt(annotation, scope, _PREC_TERM)
            b = _pt(open_term(body, Var(name)), scope + [name], _PREC_TERM)
            return _wrap(f"let {name} := {d} : {a} in {b}", prec > _PREC_TERM)
        case Elim(scrutinee, block, ind, motives, cases):
            s = _pt(scrutinee, scope, _PREC_TERM)
            ms = ", ".join(_pt(m, scope, _PREC_TERM) for m in motives)
            cs = ", ".join(_pt(c, scope, _PREC_TERM) for c in cases)
            return f"Elim({s}; {block}.{ind}; {ms}; {cs})"
    raise ValueError(f"cannot print {t!r}")


def _avoid(body: Term, scope: list[str]) -> set[str]:
    return free_vars(body) | set(scope)


def _wrap(s: str, needed: bool) -> str:
    return f"({s})" if needed else s


def print_block(name: str, block: InductiveBlock) -> str:
    sigs = "; ".join(f"{n} : {print_term(t)}" for n, t in block.inds)
    csigs = "; ".join(f"{n} : {print_term(t)}" for n, t in block.constrs)
    return f"inductive {name} params {block.param_count} {{ {sigs} := {csigs} }}."


def print_context(ctx: Context) -> str:
    lines = []
    for entry in ctx.entries:
        if isinstance(entry, Hyp):
            lines.append(f"axiom {entry.name} : {print_term(entry.type)}.")
        elif isinstance(entry, Def):
            lines.append(
                f"def {entry.name} : {print_term(entry.type)} := {print_term(entry.body)}."
            )
        else:
            lines.append(print_block(entry.name, entry.block))
    return "\n".join(lines)
