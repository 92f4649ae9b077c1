"""Formula language of S5BKE.

Core AST with exactly seven node kinds (variables, falsum, negation,
implication and the three modalities), an ASCII concrete grammar whose
remaining connectives are definitional sugar, a canonical fully
parenthesized printer, substitution, and the classical-tautology oracle
used to recognize instances of the tautology axiom scheme.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .errors import AtomLimitExceeded, ParseError, SourceSpan

RESERVED_WORDS = frozenset({"K", "B", "bot", "top"})

_VAR_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")

# Maximum number of distinct abstraction atoms the tautology oracle accepts.
ATOM_LIMIT = 20


class Formula:
    """Base class of the seven core AST node kinds."""

    __slots__ = ()

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Var(Formula):
    name: str

    def __post_init__(self) -> None:
        if not _VAR_RE.match(self.name) or self.name in RESERVED_WORDS:
            raise ValueError(f"invalid variable name: {self.name!r}")


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Neg(Formula):
    sub: Formula


@dataclass(frozen=True)
class Impl(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    sub: Formula


@dataclass(frozen=True)
class K(Formula):
    sub: Formula


@dataclass(frozen=True)
class B(Formula):
    sub: Formula


# -- definitional sugar -------------------------------------------------
#
# These builders mirror the parser's desugaring and are kept independent
# of it so tests can cross-check the two.

def top() -> Formula:
    return Neg(Bot())


def conj(a: Formula, b: Formula) -> Formula:
    return Neg(Impl(a, Neg(b)))


def disj(a: Formula, b: Formula) -> Formula:
    return Impl(Neg(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return conj(Impl(a, b), Impl(b, a))


def equiv(a: Formula, b: Formula) -> Formula:
    """Propositional identity: box of the biconditional."""
    return Box(iff(a, b))


def diamond(a: Formula) -> Formula:
    return Neg(Box(Neg(a)))


# -- concrete syntax ----------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    start: int
    end: int

    @property
    def span(self) -> SourceSpan:
        return SourceSpan(self.start, self.end)


_TOKEN_RE = re.compile(
    r"""
      (?P<WS>      [ \t\r\n]+        )
    | (?P<COMMENT> \#[^\n]*          )
    | (?P<IFF>     <->               )
    | (?P<ARROW>   ->                )
    | (?P<IDENT2>  ==                )
    | (?P<BOX>     \[\]              )
    | (?P<DIAMOND> <>                )
    | (?P<NEG>     ~                 )
    | (?P<AND>     &                 )
    | (?P<OR>      \|                )
    | (?P<LPAR>    \(                )
    | (?P<RPAR>    \)                )
    | (?P<KOP>     K                 )
    | (?P<BOP>     B                 )
    | (?P<IDENT>   [a-z][a-zA-Z0-9_]*)
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> Iterator[_Token]:
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unknown token {text[pos]!r}", SourceSpan(pos, pos + 1))
        kind = m.lastgroup
        assert kind is not None
        if kind not in ("WS", "COMMENT"):
            value = m.group()
            if kind == "IDENT" and value in ("bot", "top"):
                kind = value.upper()
            yield _Token(kind, value, pos, m.end())
        pos = m.end()
    yield _Token("EOF", "", n, n)


class _Parser:
    """Recursive-descent parser for the ASCII grammar.

    Precedence, tightest first: unary prefixes ``~ [] <> K B``, then
    ``&`` (left), ``|`` (left), ``->`` (right), and ``<->`` / ``==``
    (non-associative, lowest).  All sugar is eliminated during parsing.
    """

    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        f = self.parse_iff()
        tok = self.peek()
        if tok.kind != "EOF":
            raise ParseError(f"unexpected {tok.text!r} after formula", tok.span)
        return f

    def parse_iff(self) -> Formula:
        left = self.parse_impl()
        tok = self.peek()
        if tok.kind not in ("IFF", "IDENT2"):
            return left
        self.advance()
        right = self.parse_impl()
        trailing = self.peek()
        if trailing.kind in ("IFF", "IDENT2"):
            raise ParseError(
                f"{tok.text!r} is non-associative; parenthesize the chain",
                trailing.span,
            )
        # a <-> b  ~~>  (a -> b) & (b -> a);  a == b  ~~>  [](a <-> b)
        both = Neg(Impl(Impl(left, right), Neg(Impl(right, left))))
        return Box(both) if tok.kind == "IDENT2" else both

    def parse_impl(self) -> Formula:
        left = self.parse_or()
        if self.peek().kind == "ARROW":
            self.advance()
            return Impl(left, self.parse_impl())
        return left

    def parse_or(self) -> Formula:
        f = self.parse_and()
        while self.peek().kind == "OR":
            self.advance()
            f = Impl(Neg(f), self.parse_and())
        return f

    def parse_and(self) -> Formula:
        f = self.parse_unary()
        while self.peek().kind == "AND":
            self.advance()
            f = Neg(Impl(f, Neg(self.parse_unary())))
        return f

    def parse_unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "NEG":
            self.advance()
            return Neg(self.parse_unary())
        if tok.kind == "BOX":
            self.advance()
            return Box(self.parse_unary())
        if tok.kind == "DIAMOND":
            self.advance()
            return Neg(Box(Neg(self.parse_unary())))
        if tok.kind == "KOP":
            self.advance()
            return K(self.parse_unary())
        if tok.kind == "BOP":
            self.advance()
            return B(self.parse_unary())
        return self.parse_atom()

    def parse_atom(self) -> Formula:
        tok = self.advance()
        if tok.kind == "IDENT":
            return Var(tok.text)
        if tok.kind == "BOT":
            return Bot()
        if tok.kind == "TOP":
            return Neg(Bot())
        if tok.kind == "LPAR":
            f = self.parse_iff()
            closing = self.advance()
            if closing.kind != "RPAR":
                raise ParseError("unbalanced parenthesis", closing.span)
            return f
        if tok.kind == "EOF":
            raise ParseError("unexpected end of input", tok.span)
        raise ParseError(f"expected a formula, found {tok.text!r}", tok.span)


def parse(text: str) -> Formula:
    """Parse concrete syntax into the desugared core AST."""
    return _Parser(text).parse()


def format_formula(f: Formula) -> str:
    """Canonical fully parenthesized core-connective form.

    ``parse(format_formula(f))`` is structurally equal to ``f``.
    """
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Neg):
        return f"(~{format_formula(f.sub)})"
    if isinstance(f, Impl):
        return f"({format_formula(f.left)} -> {format_formula(f.right)})"
    if isinstance(f, Box):
        return f"([]{format_formula(f.sub)})"
    if isinstance(f, K):
        return f"(K {format_formula(f.sub)})"
    if isinstance(f, B):
        return f"(B {format_formula(f.sub)})"
    raise TypeError(f"not a formula: {f!r}")


def substitute(chi: Formula, x: str, psi: Formula) -> Formula:
    """Replace every occurrence of variable ``x`` in ``chi`` by ``psi``."""
    if isinstance(chi, Var):
        return psi if chi.name == x else chi
    if isinstance(chi, Bot):
        return chi
    if isinstance(chi, Neg):
        return Neg(substitute(chi.sub, x, psi))
    if isinstance(chi, Impl):
        return Impl(substitute(chi.left, x, psi), substitute(chi.right, x, psi))
    if isinstance(chi, Box):
        return Box(substitute(chi.sub, x, psi))
    if isinstance(chi, K):
        return K(substitute(chi.sub, x, psi))
    if isinstance(chi, B):
        return B(substitute(chi.sub, x, psi))
    raise TypeError(f"not a formula: {chi!r}")


def variables(f: Formula) -> frozenset[str]:
    """Names of the variables occurring in ``f``."""
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            out.add(g.name)
        elif isinstance(g, (Neg, Box, K, B)):
            stack.append(g.sub)
        elif isinstance(g, Impl):
            stack.append(g.left)
            stack.append(g.right)
    return frozenset(out)


def _collect_atoms(f: Formula, atoms: dict[Formula, int]) -> None:
    # Maximal modal subformulas and variables become opaque atoms;
    # structurally identical ones share an index.
    if isinstance(f, (Var, Box, K, B)):
        atoms.setdefault(f, len(atoms))
    elif isinstance(f, Neg):
        _collect_atoms(f.sub, atoms)
    elif isinstance(f, Impl):
        _collect_atoms(f.left, atoms)
        _collect_atoms(f.right, atoms)


def _eval_abstraction(f: Formula, atoms: dict[Formula, int], valuation: int) -> bool:
    if isinstance(f, (Var, Box, K, B)):
        return bool((valuation >> atoms[f]) & 1)
    if isinstance(f, Bot):
        return False
    if isinstance(f, Neg):
        return not _eval_abstraction(f.sub, atoms, valuation)
    if isinstance(f, Impl):
        return (not _eval_abstraction(f.left, atoms, valuation)) or _eval_abstraction(
            f.right, atoms, valuation
        )
    raise TypeError(f"not a formula: {f!r}")


def is_classical_tautology(f: Formula) -> bool:
    """True iff the boolean abstraction of ``f`` is a tautology.

    The abstraction maps each variable and each maximal subformula headed
    by a modal operator to a propositional atom and evaluates all
    valuations.  Raises :class:`AtomLimitExceeded` past ``ATOM_LIMIT``
    distinct atoms.
    """
    atoms: dict[Formula, int] = {}
    _collect_atoms(f, atoms)
    if len(atoms) > ATOM_LIMIT:
        raise AtomLimitExceeded(
            f"{len(atoms)} abstraction atoms exceed the limit of {ATOM_LIMIT}"
        )
    return all(
        _eval_abstraction(f, atoms, valuation) for valuation in range(1 << len(atoms))
    )
