"""Exception types shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    """Half-open offset range [start, end) into an input text."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError(f"invalid span: start {self.start} > end {self.end}")


class S5BKEError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(S5BKEError):
    """Malformed formula or file; carries the offending source span."""

    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{message} (at {span.start}..{span.end})")
        self.message = message
        self.span = span


class AtomLimitExceeded(S5BKEError):
    """Tautology check aborted: more than the allowed number of abstraction atoms."""


class SizeLimitExceeded(S5BKEError):
    """Model or search space beyond the supported desk-scale guards."""


class MalformedTable(S5BKEError):
    """Operator table of an algebraic model has the wrong shape or range."""


class DuplicatePropositions(S5BKEError):
    """Explicit proposition list of a frame contains a repeated world set."""


class UnboundVariable(S5BKEError):
    """Formula mentions a variable the assignment does not cover."""


class GuardViolation(S5BKEError):
    """Search bounds outside the supported range."""


@dataclass(frozen=True)
class Violation:
    """One failed validation condition with its witnesses.

    ``at`` is the atom or world index the condition is local to, or -1
    for conditions on the structure as a whole.
    """

    code: str
    at: int
    witnesses: tuple[int, ...]
    message: str

    def __str__(self) -> str:
        return self.message
