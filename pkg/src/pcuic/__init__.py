"""A kernel for a predicative calculus with cumulative inductive types,
plus a finite set-theoretic oracle for cross-validating eliminator
reduction."""

from .conversion import DEFAULT_FUEL, Fuel, WhnfResult, conv, normalize, whnf
from .cumulativity import SubtypeVerdict, applied_ind_subtype, ind_leq, subtype
from .errors import CheckError, FuelExhausted, InternalError, KernelError, ParseError
from .inductive import (
    TelescopeView,
    check_block_wf,
    constrs_of,
    elim_type,
    qualify_members,
    rec_unfold,
    strict_pos,
    strict_pos_arg,
)
from .surface import SourceFile, parse, parse_term, print_block, print_context, print_term
from .syntax import (
    App,
    BlockDecl,
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
    Sort,
    SortT,
    Term,
    Univ,
    Var,
    alpha_eq,
    free_vars,
    size,
    subst,
)
from .typecheck import check, infer, prod_rule, sort_of, wf_ctx

__version__ = "0.1.0"
