"""Structured errors shared by the kernel modules.

Every checker failure carries a machine-readable ``kind`` so tests and the
CLI can match on failure classes instead of message text.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

#: The error kinds a type-checking failure may carry.
CHECK_ERROR_KINDS = frozenset(
    {
        "unbound-variable",
        "duplicate-name",
        "not-a-sort",
        "not-a-function",
        "app-mismatch",
        "block-ill-formed",
        "elim-motive-mismatch",
        "elim-case-mismatch",
        "universe-inconsistency",
        "fuel-exhausted",
    }
)

#: Sub-kinds used with kind ``block-ill-formed``.
BLOCK_ERROR_SUBKINDS = frozenset(
    {
        "duplicate-name",
        "parameter-telescope",
        "parametricity",
        "arity-shape",
        "arity-sort-prop",
        "mixed-sorts",
        "constructor-target",
        "strict-positivity",
        "member-typing",
    }
)


class KernelError(Exception):
    """Base class for all errors raised by this package."""


class InternalError(KernelError):
    """An internal invariant was violated; indicates a bug, not bad input."""


@dataclass
class CheckError(KernelError):
    """A type-checking failure with a structured payload.

    ``expected``/``actual`` are terms and are present for mismatch kinds;
    ``member`` names the offending block member for block-ill-formed errors;
    ``location`` is a (line, column) pair when a source position is known.
    """

    kind: str
    message: str = ""
    sub_kind: Optional[str] = None
    member: Optional[str] = None
    expected: Any = None
    actual: Any = None
    location: Optional[tuple[int, int]] = field(default=None)

    def __post_init__(self) -> None:
        if self.kind not in CHECK_ERROR_KINDS:
            raise InternalError(f"unknown error kind {self.kind!r}")
        if self.sub_kind is not None and self.sub_kind not in BLOCK_ERROR_SUBKINDS:
            raise InternalError(f"unknown block error sub-kind {self.sub_kind!r}")

    def __str__(self) -> str:
        parts = [self.kind]
        if self.sub_kind:
            parts[0] = f"{self.kind}({self.sub_kind})"
        if self.member:
            parts.append(f"member {self.member!r}")
        if self.message:
            parts.append(self.message)
        return ": ".join(parts)


class FuelExhausted(CheckError):
    """Reduction ran out of fuel; signals ill-typed or adversarial input."""

    def __init__(self, message: str = "reduction fuel exhausted") -> None:
        super().__init__(kind="fuel-exhausted", message=message)


class ParseError(KernelError):
    """A lexical or syntax error in a source file, with a position."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
