"""Hilbert-style proof kernel.

Recognizes instances of the ten axiom schemes of S5BKE and checks
derivations line by line: premises, axiom instances, modus ponens, and
axiom necessitation (box introduction restricted to axiom lines).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import AtomLimitExceeded, ParseError, SourceSpan
from .syntax import B, Bot, Box, Formula, Impl, K, Neg, Var, is_classical_tautology, parse


class SchemeId(enum.Enum):
    """The ten axiom schemes, in their conventional order."""

    CL = "CL"                # classical tautologies
    K_FACT = "K_FACT"        # K phi -> phi
    K_TO_B = "K_TO_B"        # K phi -> B phi
    BOX_4 = "BOX_4"          # [] phi -> [][] phi
    BOX_5 = "BOX_5"          # ~[] phi -> []~[] phi
    BOX_TO_K = "BOX_TO_K"    # [] phi -> K phi
    K_DIST = "K_DIST"        # K(phi -> psi) -> (K phi -> K psi)
    B_DIST = "B_DIST"        # B(phi -> psi) -> (B phi -> B psi)
    BOX_DIST = "BOX_DIST"    # [](phi -> psi) -> ([] phi -> [] psi)
    B_CONS = "B_CONS"        # ~ B bot


def _match_patterns(f: Formula) -> set[SchemeId]:
    found: set[SchemeId] = set()
    if f == Neg(B(Bot())):
        found.add(SchemeId.B_CONS)
    if not isinstance(f, Impl):
        return found
    lhs, rhs = f.left, f.right
    if isinstance(lhs, K) and lhs.sub == rhs:
        found.add(SchemeId.K_FACT)
    if isinstance(lhs, K) and isinstance(rhs, B) and lhs.sub == rhs.sub:
        found.add(SchemeId.K_TO_B)
    if isinstance(lhs, Box) and rhs == Box(Box(lhs.sub)):
        found.add(SchemeId.BOX_4)
    if (
        isinstance(lhs, Neg)
        and isinstance(lhs.sub, Box)
        and rhs == Box(Neg(Box(lhs.sub.sub)))
    ):
        found.add(SchemeId.BOX_5)
    if isinstance(lhs, Box) and isinstance(rhs, K) and lhs.sub == rhs.sub:
        found.add(SchemeId.BOX_TO_K)
    # distribution schemes: Op(phi -> psi) -> (Op phi -> Op psi)
    for op, scheme in ((K, SchemeId.K_DIST), (B, SchemeId.B_DIST), (Box, SchemeId.BOX_DIST)):
        if (
            isinstance(lhs, op)
            and isinstance(lhs.sub, Impl)
            and isinstance(rhs, Impl)
            and isinstance(rhs.left, op)
            and isinstance(rhs.right, op)
            and rhs.left.sub == lhs.sub.left
            and rhs.right.sub == lhs.sub.right
        ):
            found.add(scheme)
    return found


def match_axiom(f: Formula) -> set[SchemeId]:
    """Every axiom scheme ``f`` instantiates.

    Pattern schemes are matched structurally; CL membership is decided by
    the tautology oracle.  If the oracle hits its atom limit the pattern
    matches are still returned; :class:`AtomLimitExceeded` propagates only
    when no pattern matched either.
    """
    found = _match_patterns(f)
    try:
        if is_classical_tautology(f):
            found.add(SchemeId.CL)
    except AtomLimitExceeded:
        if not found:
            raise
    return found


def scheme_instance(
    scheme: SchemeId, phi: Formula, psi: Optional[Formula] = None
) -> Formula:
    """Build the instance of a pattern scheme at ``phi`` (and ``psi``).

    ``B_CONS`` ignores both metavariables; the distribution schemes
    require ``psi``.  ``CL`` has no structural pattern and is rejected.
    """
    if scheme is SchemeId.CL:
        raise ValueError("CL is not a pattern scheme; any tautology instantiates it")
    if scheme is SchemeId.B_CONS:
        return Neg(B(Bot()))
    if scheme is SchemeId.K_FACT:
        return Impl(K(phi), phi)
    if scheme is SchemeId.K_TO_B:
        return Impl(K(phi), B(phi))
    if scheme is SchemeId.BOX_4:
        return Impl(Box(phi), Box(Box(phi)))
    if scheme is SchemeId.BOX_5:
        return Impl(Neg(Box(phi)), Box(Neg(Box(phi))))
    if scheme is SchemeId.BOX_TO_K:
        return Impl(Box(phi), K(phi))
    if psi is None:
        raise ValueError(f"{scheme.value} needs two metavariables")
    if scheme is SchemeId.K_DIST:
        return Impl(K(Impl(phi, psi)), Impl(K(phi), K(psi)))
    if scheme is SchemeId.B_DIST:
        return Impl(B(Impl(phi, psi)), Impl(B(phi), B(psi)))
    if scheme is SchemeId.BOX_DIST:
        return Impl(Box(Impl(phi, psi)), Impl(Box(phi), Box(psi)))
    raise ValueError(f"unknown scheme {scheme!r}")


def scheme_examples() -> dict[SchemeId, Formula]:
    """One canonical instance per scheme, used by selftests and suites."""
    x, y = Var("x"), Var("y")
    out = {
        SchemeId.CL: Impl(K(x), K(x)),
        SchemeId.B_CONS: Neg(B(Bot())),
    }
    for s in (SchemeId.K_FACT, SchemeId.K_TO_B, SchemeId.BOX_4, SchemeId.BOX_5,
              SchemeId.BOX_TO_K):
        out[s] = scheme_instance(s, x)
    for s in (SchemeId.K_DIST, SchemeId.B_DIST, SchemeId.BOX_DIST):
        out[s] = scheme_instance(s, x, y)
    return out


# -- derivations --------------------------------------------------------

@dataclass(frozen=True)
class Premise:
    name: str


@dataclass(frozen=True)
class Axiom:
    scheme: SchemeId


@dataclass(frozen=True)
class MP:
    i: int
    j: int


@dataclass(frozen=True)
class AN:
    i: int


Justification = Union[Premise, Axiom, MP, AN]


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class Derivation:
    """A premise map plus an ordered list of justified lines (1-based)."""

    premises: dict[str, Formula] = field(default_factory=dict)
    lines: tuple[ProofLine, ...] = ()

    @property
    def conclusion(self) -> Formula:
        if not self.lines:
            raise ValueError("derivation has no lines")
        return self.lines[-1].formula


@dataclass(frozen=True)
class CheckVerdict:
    accepted: bool
    first_failure: Optional[tuple[int, str]] = None

    def __post_init__(self) -> None:
        if self.accepted == (self.first_failure is not None):
            raise ValueError("accepted xor first_failure must hold")


def _check_line(d: Derivation, idx: int) -> Optional[str]:
    """Reason string if 1-based line ``idx`` is unjustified, else None.

    Assumes all earlier lines already checked out.
    """
    line = d.lines[idx - 1]
    just = line.justification
    if isinstance(just, Premise):
        if just.name not in d.premises:
            return f"unknown-premise:{just.name}"
        if d.premises[just.name] != line.formula:
            return f"premise-mismatch:{just.name}"
        return None
    if isinstance(just, Axiom):
        try:
            if just.scheme not in match_axiom(line.formula):
                return f"axiom-mismatch:{just.scheme.value}"
        except AtomLimitExceeded:
            return "atom-limit-exceeded"
        return None
    if isinstance(just, MP):
        for cited in (just.i, just.j):
            if not 1 <= cited < idx:
                return f"bad-index:{cited}"
        antecedent = d.lines[just.i - 1].formula
        implication = d.lines[just.j - 1].formula
        if implication != Impl(antecedent, line.formula):
            return f"mp-mismatch:{just.i},{just.j}"
        return None
    if isinstance(just, AN):
        if not 1 <= just.i < idx:
            return f"bad-index:{just.i}"
        if not isinstance(d.lines[just.i - 1].justification, Axiom):
            return f"an-on-non-axiom:{just.i}"
        if line.formula != Box(d.lines[just.i - 1].formula):
            return f"an-mismatch:{just.i}"
        return None
    return "unknown-justification"


def check(d: Derivation) -> CheckVerdict:
    """Accept iff every line is justified; report the first failure."""
    if not d.lines:
        return CheckVerdict(False, (0, "empty-derivation"))
    for idx in range(1, len(d.lines) + 1):
        reason = _check_line(d, idx)
        if reason is not None:
            return CheckVerdict(False, (idx, reason))
    return CheckVerdict(True)


def verify_theorem(phi: Formula, d: Derivation) -> bool:
    """True iff ``d`` derives ``phi`` from the empty premise set."""
    return (not d.premises) and check(d).accepted and d.conclusion == phi


# -- proof file format --------------------------------------------------
#
# Line-oriented text:
#
#   premises:
#   h: x -> y
#   proof:
#   1. K x -> x ; ax K_FACT
#   2. [](K x -> x) ; an 1
#
# `#` starts a comment; the premises section may be omitted when empty.

_SCHEME_BY_NAME = {s.value: s for s in SchemeId}


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def _parse_justification(text: str, offset: int) -> Justification:
    parts = text.split()
    span = SourceSpan(offset, offset + len(text))
    if not parts:
        raise ParseError("missing justification", span)
    tag, args = parts[0], parts[1:]
    if tag == "prem":
        if len(args) != 1:
            raise ParseError("prem takes one premise name", span)
        return Premise(args[0])
    if tag == "ax":
        if len(args) != 1 or args[0] not in _SCHEME_BY_NAME:
            raise ParseError(f"unknown axiom scheme in {text!r}", span)
        return Axiom(_SCHEME_BY_NAME[args[0]])
    if tag == "mp":
        if len(args) != 2 or not all(a.isdigit() for a in args):
            raise ParseError("mp takes two line numbers", span)
        return MP(int(args[0]), int(args[1]))
    if tag == "an":
        if len(args) != 1 or not args[0].isdigit():
            raise ParseError("an takes one line number", span)
        return AN(int(args[0]))
    raise ParseError(f"unknown justification {tag!r}", span)


def parse_derivation(text: str) -> Derivation:
    """Parse the proof file format into a :class:`Derivation`."""
    premises: dict[str, Formula] = {}
    lines: list[ProofLine] = []
    section = None
    offset = 0
    for raw in text.splitlines(keepends=True):
        stripped = _strip_comment(raw.rstrip("\n")).strip()
        start = offset + raw.index(stripped[0]) if stripped else offset
        offset += len(raw)
        if not stripped:
            continue
        if stripped == "premises:":
            section = "premises"
            continue
        if stripped == "proof:":
            section = "proof"
            continue
        span = SourceSpan(start, start + len(stripped))
        if section == "premises":
            name, sep, rhs = stripped.partition(":")
            name = name.strip()
            if not sep or not name:
                raise ParseError("expected `name: formula`", span)
            if name in premises:
                raise ParseError(f"duplicate premise name {name!r}", span)
            premises[name] = parse(rhs)
        elif section == "proof":
            head, sep, just_text = stripped.partition(";")
            if not sep:
                raise ParseError("expected `; <justification>`", span)
            num, dot, formula_text = head.partition(".")
            if not dot or not num.strip().isdigit():
                raise ParseError("expected `n. <formula>`", span)
            if int(num.strip()) != len(lines) + 1:
                raise ParseError(
                    f"line numbered {num.strip()} but {len(lines) + 1} expected", span
                )
            just = _parse_justification(just_text.strip(), start)
            lines.append(ProofLine(parse(formula_text), just))
        else:
            raise ParseError("content before `premises:`/`proof:` header", span)
    if not lines:
        raise ParseError("no proof lines", SourceSpan(0, len(text)))
    return Derivation(premises=premises, lines=tuple(lines))


def format_justification(just: Justification) -> str:
    if isinstance(just, Premise):
        return f"prem {just.name}"
    if isinstance(just, Axiom):
        return f"ax {just.scheme.value}"
    if isinstance(just, MP):
        return f"mp {just.i} {just.j}"
    if isinstance(just, AN):
        return f"an {just.i}"
    raise TypeError(f"not a justification: {just!r}")


def format_derivation(d: Derivation) -> str:
    """Emit the proof file format; parses back to an equal derivation."""
    out = []
    if d.premises:
        out.append("premises:")
        for name, f in d.premises.items():
            out.append(f"{name}: {f}")
    out.append("proof:")
    for idx, line in enumerate(d.lines, start=1):
        out.append(f"{idx}. {line.formula} ; {format_justification(line.justification)}")
    return "\n".join(out) + "\n"
