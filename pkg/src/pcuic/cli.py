"""Command-line front end.

    pcuic check FILE       batch-check a file, printing query output
    pcuic eval FILE -e E   normalize an expression in the file's context
    pcuic conv FILE -e A -e B
    pcuic sub FILE -e T -e U
    pcuic oracle CONFIG    run a rule-set interpretation and agreement checks

Exit codes: 0 success, 1 type/agreement error, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from . import model_oracle
from .conversion import Fuel, conv, normalize
from .cumulativity import subtype
from .errors import CheckError, KernelError, ParseError
from .inductive import check_block_wf
from .model_oracle import (
    DepthExhausted,
    FragmentEnv,
    FragmentError,
    RuleSet,
    embed_normal,
    eval_value,
    interp_block,
    lfp_stages,
    pretty_value,
)
from .surface import (
    AxiomDecl,
    CheckDecl,
    ConvDecl,
    DefDecl,
    EvalDecl,
    InductiveDecl,
    SourceFile,
    SubDecl,
    parse,
    parse_term,
    print_term,
)
from .syntax import BlockDecl, Context, Def, Hyp
from .typecheck import check, infer, sort_of

EXIT_OK = 0
EXIT_TYPE_ERROR = 1
EXIT_USAGE = 2


@dataclass
class Outcome:
    index: int
    kind: str
    name: Optional[str]
    status: str  # "ok" | "error"
    output: Optional[str] = None
    error: Optional[dict] = None
    elapsed_ms: float = 0.0


@dataclass
class Report:
    """Per-declaration outcomes; overall status is ok iff every declaration
    succeeded."""

    path: str
    outcomes: list[Outcome] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(o.status == "ok" for o in self.outcomes)

    def to_json(self, with_timings: bool = True) -> str:
        decls = []
        for o in self.outcomes:
            d = {
                "index": o.index,
                "kind": o.kind,
                "name": o.name,
                "status": o.status,
                "output": o.output,
                "error": o.error,
            }
            if with_timings:
                d["elapsed_ms"] = round(o.elapsed_ms, 3)
            decls.append(d)
        return json.dumps(
            {
                "file": self.path,
                "status": "ok" if self.ok else "error",
                "declarations": decls,
            },
            indent=2,
        )


def _error_payload(err: Exception) -> dict:
    if isinstance(err, CheckError):
        payload = {"kind": err.kind, "message": str(err)}
        if err.sub_kind:
            payload["sub_kind"] = err.sub_kind
        if err.member:
            payload["member"] = err.member
        if err.expected is not None:
            payload["expected"] = print_term(err.expected)
        if err.actual is not None:
            payload["actual"] = print_term(err.actual)
        return payload
    return {"kind": "assertion-failed", "message": str(err)}


class QueryFailed(KernelError):
    pass


def process_source(
    source: SourceFile,
    path: str,
    fuel_budget: int,
    strict_app: bool = False,
    keep_going: bool = False,
    trace_subtyping: bool = False,
    emit=lambda s: None,
) -> tuple[Report, Context]:
    """Thread a context through the declarations, collecting outcomes."""
    report = Report(path)
    ctx = Context()
    for i, decl in enumerate(source.decls):
        kind = type(decl).__name__.removesuffix("Decl").lower()
        name = getattr(decl, "name", None)
        start = time.perf_counter()
        output: Optional[str] = None
        try:
            fuel = Fuel(fuel_budget)
            if isinstance(decl, AxiomDecl):
                sort_of(ctx, decl.type, fuel)
                ctx = ctx.push(Hyp(decl.name, decl.type))
            elif isinstance(decl, DefDecl):
                sort_of(ctx, decl.type, fuel)
                check(ctx, decl.body, decl.type, fuel, strict_app=strict_app)
                ctx = ctx.push(Def(decl.name, decl.body, decl.type))
            elif isinstance(decl, InductiveDecl):
                check_block_wf(ctx, decl.name, decl.block)
                ctx = ctx.push(BlockDecl(decl.name, decl.block))
            elif isinstance(decl, CheckDecl):
                ty = infer(ctx, decl.term, fuel, strict_app=strict_app)
                output = f"{print_term(decl.term)} : {print_term(ty)}"
            elif isinstance(decl, EvalDecl):
                infer(ctx, decl.term, fuel, strict_app=strict_app)
                output = print_term(normalize(ctx, decl.term, fuel))
            elif isinstance(decl, ConvDecl):
                infer(ctx, decl.lhs, fuel, strict_app=strict_app)
                infer(ctx, decl.rhs, fuel, strict_app=strict_app)
                if not conv(ctx, decl.lhs, decl.rhs, fuel):
                    raise QueryFailed("terms are not judgementally equal")
                output = "conv: true"
            elif isinstance(decl, SubDecl):
                infer(ctx, decl.lhs, fuel, strict_app=strict_app)
                infer(ctx, decl.rhs, fuel, strict_app=strict_app)
                verdict = subtype(ctx, decl.lhs, decl.rhs, fuel)
                if trace_subtyping:
                    emit(f"trace: {list(verdict.trace)}")
                if not verdict.holds:
                    raise QueryFailed(verdict.reason or "subtyping does not hold")
                output = f"sub: true [{', '.join(verdict.trace)}]"
            outcome = Outcome(
                i, kind, name, "ok", output,
                elapsed_ms=(time.perf_counter() - start) * 1000,
            )
            report.outcomes.append(outcome)
            if output:
                emit(output)
        except (CheckError, QueryFailed) as err:
            outcome = Outcome(
                i, kind, name, "error", None, _error_payload(err),
                elapsed_ms=(time.perf_counter() - start) * 1000,
            )
            report.outcomes.append(outcome)
            line, col = decl.span
            print(f"{path}:{line}:{col}: error: {err}", file=sys.stderr)
            if not keep_going:
                break
    return report, ctx


def _load_context(path: str, args, quiet: bool = False) -> tuple[Report, Context]:
    with open(path, "rb") as fh:
        source = parse(fh.read())
    silent = quiet or args.json
    return process_source(
        source,
        path,
        fuel_budget=args.fuel,
        strict_app=args.strict_app,
        keep_going=args.keep_going,
        trace_subtyping=getattr(args, "trace_subtyping", False) and not quiet,
        emit=(lambda s: None) if silent else print,
    )


def cmd_check(args) -> int:
    try:
        report, _ = _load_context(args.file, args)
    except (OSError, ParseError) as err:
        print(f"{args.file}: {err}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(report.to_json())
    return EXIT_OK if report.ok else EXIT_TYPE_ERROR


def _query_command(args, run) -> int:
    try:
        report, ctx = _load_context(args.file, args, quiet=True)
    except (OSError, ParseError) as err:
        print(f"{args.file}: {err}", file=sys.stderr)
        return EXIT_USAGE
    if not report.ok:
        return EXIT_TYPE_ERROR
    try:
        exprs = [parse_term(e, ctx) for e in args.expr]
    except ParseError as err:
        print(f"<expr>:{err}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(ctx, exprs)
    except CheckError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_TYPE_ERROR


def cmd_eval(args) -> int:
    def run(ctx, exprs):
        fuel = Fuel(args.fuel)
        (t,) = exprs
        infer(ctx, t, fuel, strict_app=args.strict_app)
        print(print_term(normalize(ctx, t, fuel)))
        return EXIT_OK

    return _query_command(args, run)


def cmd_conv(args) -> int:
    def run(ctx, exprs):
        fuel = Fuel(args.fuel)
        a, b = exprs
        infer(ctx, a, fuel)
        infer(ctx, b, fuel)
        ok = conv(ctx, a, b, fuel)
        print("conv: true" if ok else "conv: false")
        return EXIT_OK if ok else EXIT_TYPE_ERROR

    return _query_command(args, run)


def cmd_sub(args) -> int:
    def run(ctx, exprs):
        fuel = Fuel(args.fuel)
        t, u = exprs
        verdict = subtype(ctx, t, u, fuel)
        if args.trace_subtyping:
            print(f"trace: {list(verdict.trace)}")
        if verdict.holds:
            print(f"sub: true [{', '.join(verdict.trace)}]")
            return EXIT_OK
        print(f"sub: false ({verdict.reason})")
        return EXIT_TYPE_ERROR

    return _query_command(args, run)


# ---------------------------------------------------------------------------
# Oracle configs
#
# Key-value lines, '#' comments:
#   file PATH            source file providing the context
#   block NAME           block to interpret
#   depth N              truncation depth (default 6)
#   param ind MEMBER K   parameter value: elements of inductive MEMBER at depth K
#   param enum K         parameter value: a K-element enumeration
#   agree EXPR           check oracle evaluation against kernel normalization
#   empty                interpret the empty rule set instead of a block


@dataclass
class OracleConfig:
    file: Optional[str] = None
    block: Optional[str] = None
    depth: int = 6
    params: list[tuple] = field(default_factory=list)
    agree: list[str] = field(default_factory=list)
    empty: bool = False


def parse_oracle_config(text: str) -> OracleConfig:
    cfg = OracleConfig()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key = parts[0]
        if key == "file" and len(parts) == 2:
            cfg.file = parts[1]
        elif key == "block" and len(parts) == 2:
            cfg.block = parts[1]
        elif key == "depth" and len(parts) == 2:
            cfg.depth = int(parts[1])
        elif key == "param" and len(parts) >= 2:
            if parts[1] == "enum" and len(parts) == 3:
                cfg.params.append(("enum", int(parts[2])))
            elif parts[1] == "ind" and len(parts) == 4:
                cfg.params.append(("ind", parts[2], int(parts[3])))
            else:
                raise ParseError(f"bad param spec {line!r}", lineno, 1)
        elif key == "agree":
            cfg.agree.append(line[len("agree") :].strip())
        elif key == "empty":
            cfg.empty = True
        else:
            raise ParseError(f"unknown oracle config line {line!r}", lineno, 1)
    return cfg


def _resolve_member(ctx: Context, member: str) -> tuple[str, object]:
    for bd in ctx.blocks():
        if bd.block.member_kind(member) == "ind":
            return bd.name, bd.block
    raise FragmentError(f"no inductive type named {member!r} in the context")


def cmd_oracle(args) -> int:
    import os

    try:
        with open(args.config) as fh:
            cfg = parse_oracle_config(fh.read())
    except (OSError, ParseError, ValueError) as err:
        print(f"oracle config: {err}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.file and not os.path.isabs(cfg.file) and not os.path.exists(cfg.file):
        # also try resolving relative to the config's own directory
        candidate = os.path.join(os.path.dirname(os.path.abspath(args.config)), cfg.file)
        if os.path.exists(candidate):
            cfg.file = candidate

    if cfg.empty:
        stages = lfp_stages(RuleSet(), max(cfg.depth, 1))
        print("stages:", " ".join(str(len(s)) for s in stages.stages))
        print(f"closed: {str(stages.closed).lower()}")
        return EXIT_OK

    if cfg.file is None or cfg.block is None:
        print("oracle config: 'file' and 'block' are required", file=sys.stderr)
        return EXIT_USAGE
    try:
        with open(cfg.file, "rb") as fh:
            source = parse(fh.read())
    except (OSError, ParseError) as err:
        print(f"{cfg.file}: {err}", file=sys.stderr)
        return EXIT_USAGE
    report, ctx = process_source(source, cfg.file, fuel_budget=args.fuel)
    if not report.ok:
        return EXIT_TYPE_ERROR

    block = ctx.lookup_block(cfg.block)
    if block is None:
        print(f"oracle: unknown block {cfg.block!r}", file=sys.stderr)
        return EXIT_TYPE_ERROR

    env = FragmentEnv(ctx, depth=cfg.depth)
    try:
        param_values = []
        for spec in cfg.params:
            if spec[0] == "enum":
                param_values.append(
                    model_oracle.fin(model_oracle.vn(i) for i in range(spec[1]))
                )
            else:
                _, member, d = spec
                bname, b = _resolve_member(ctx, member)
                bi = interp_block(env, bname, b, (), d)
                param_values.append(bi.all_ctor_values(member))
        env.sort_pool = tuple(
            v for v in param_values if isinstance(v, model_oracle.Fin)
        )
        bi = interp_block(env, cfg.block, block, tuple(param_values), cfg.depth)
    except (FragmentError, DepthExhausted) as err:
        print(f"oracle: {err}", file=sys.stderr)
        return EXIT_TYPE_ERROR

    print("stages:", " ".join(str(len(s)) for s in bi.stages.stages))
    print(f"closed: {str(bi.stages.closed).lower()}")

    all_ok = True
    for text in cfg.agree:
        try:
            t = parse_term(text, ctx)
            fuel = Fuel(args.fuel)
            infer(ctx, t, fuel)
            oracle_v = eval_value(env, t, depth=cfg.depth)
            kernel_v = embed_normal(env, normalize(ctx, t, fuel), cfg.depth)
            ok = oracle_v == kernel_v
            all_ok = all_ok and ok
            mark = "ok" if ok else "MISMATCH"
            print(
                f"agree: {pretty_value(oracle_v)} = {pretty_value(kernel_v)} [{mark}]"
            )
        except (ParseError, CheckError, FragmentError, DepthExhausted) as err:
            print(f"agree: {text}: {err}", file=sys.stderr)
            all_ok = False
    return EXIT_OK if all_ok else EXIT_TYPE_ERROR


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pcuic")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--fuel", type=int, default=1_000_000)
        sp.add_argument("--strict-app", action="store_true", dest="strict_app")
        sp.add_argument("--keep-going", action="store_true", dest="keep_going")
        sp.add_argument("--json", action="store_true")
        sp.add_argument(
            "--trace-subtyping", action="store_true", dest="trace_subtyping"
        )

    sp = sub.add_parser("check", help="type-check a .pcuic file")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("eval", help="normalize an expression")
    sp.add_argument("file")
    sp.add_argument("-e", "--expr", action="append", required=True)
    common(sp)
    sp.set_defaults(func=cmd_eval, nexpr=1)

    sp = sub.add_parser("conv", help="judgemental equality of two expressions")
    sp.add_argument("file")
    sp.add_argument("-e", "--expr", action="append", required=True)
    common(sp)
    sp.set_defaults(func=cmd_conv, nexpr=2)

    sp = sub.add_parser("sub", help="subtyping between two expressions")
    sp.add_argument("file")
    sp.add_argument("-e", "--expr", action="append", required=True)
    common(sp)
    sp.set_defaults(func=cmd_sub, nexpr=2)

    sp = sub.add_parser("oracle", help="run a set-theoretic oracle config")
    sp.add_argument("config")
    sp.add_argument("--fuel", type=int, default=1_000_000)
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    nexpr = getattr(args, "nexpr", None)
    if nexpr is not None and len(args.expr) != nexpr:
        print(f"expected {nexpr} -e expression(s)", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
