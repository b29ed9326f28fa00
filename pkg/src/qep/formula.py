"""Propositional syntax: formulas, binders, quantified theories.

Concrete syntax, ASCII only, `%` comments to end of line:

    theory  := { ("exists" | "forall") IDENT "." } formula+
    formula := impl "."
    impl    := disj [ "->" impl ]            (right associative)
    disj    := conj { "|" conj }
    conj    := neg { "&" neg }
    neg     := "~" neg | atom
    atom    := IDENT | "bot" | "false" | "true" | "(" impl ")"

Identifiers match [a-z][A-Za-z0-9_]*.  Negation and verum are sugar:
`~p` is stored as `p -> bot` and `true` as `bot -> bot`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Union

from .errors import ParseError

_ATOM_RE = re.compile(r"[a-z][A-Za-z0-9_]*")

KEYWORDS = frozenset({"exists", "forall", "bot", "false", "true"})


@dataclass(frozen=True, order=True)
class Atom:
    """A propositional variable, compared and ordered by name."""

    name: str

    def __post_init__(self) -> None:
        if not _ATOM_RE.fullmatch(self.name) or self.name in KEYWORDS:
            raise ValueError(f"invalid atom name: {self.name!r}")

    def __str__(self) -> str:
        return self.name


class Formula:
    """Base class of the formula AST.  Subclasses are frozen and hashable."""

    __slots__ = ()


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Var(Formula):
    atom: Atom


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


BOT = Bot()
TOP = Implies(BOT, BOT)


def var(name: str) -> Var:
    return Var(Atom(name))


def neg(f: Formula) -> Implies:
    """Negation as failure of support: ~f is f -> bot."""
    return Implies(f, BOT)


class Quantifier(Enum):
    EXISTS = "exists"
    FORALL = "forall"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Binder:
    """An ordered quantifier prefix; variables must be pairwise distinct."""

    entries: tuple[tuple[Quantifier, Atom], ...] = ()

    def __post_init__(self) -> None:
        seen = set()
        for _, atom in self.entries:
            if atom in seen:
                raise ValueError(f"duplicate binder variable: {atom}")
            seen.add(atom)

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __iter__(self) -> Iterator[tuple[Quantifier, Atom]]:
        return iter(self.entries)

    @property
    def head(self) -> tuple[Quantifier, Atom]:
        return self.entries[0]

    @property
    def tail(self) -> "Binder":
        return Binder(self.entries[1:])

    def atoms(self) -> frozenset[Atom]:
        return frozenset(atom for _, atom in self.entries)

    def __str__(self) -> str:
        return " ".join(f"{q} {a}" for q, a in self.entries)


@dataclass(frozen=True)
class QuantifiedTheory:
    """A binder together with a matrix of quantifier free formulas."""

    binder: Binder
    matrix: tuple[Formula, ...]

    def free_atoms(self) -> frozenset[Atom]:
        return variables(self.matrix) - self.binder.atoms()


FormulaLike = Union[Formula, QuantifiedTheory, Binder, Iterable[Formula]]


def variables(obj: FormulaLike) -> frozenset[Atom]:
    """Exact set of atoms occurring in a formula, matrix, theory or binder."""
    if isinstance(obj, QuantifiedTheory):
        return variables(obj.matrix)
    if isinstance(obj, Binder):
        return obj.atoms()
    if isinstance(obj, Formula):
        out: set[Atom] = set()
        _collect(obj, out)
        return frozenset(out)
    out = set()
    for f in obj:
        _collect(f, out)
    return frozenset(out)


def _collect(f: Formula, out: set[Atom]) -> None:
    if isinstance(f, Var):
        out.add(f.atom)
    elif isinstance(f, (And, Or, Implies)):
        _collect(f.left, out)
        _collect(f.right, out)


# ---------------------------------------------------------------------------
# Tokenizer


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


_SINGLE = {"(": "lparen", ")": "rparen", "&": "and", "|": "or", "~": "tilde", ".": "dot"}


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in _SINGLE:
            tokens.append(_Token(_SINGLE[ch], ch, line, col))
            i += 1
            col += 1
            continue
        if text.startswith("->", i):
            tokens.append(_Token("arrow", "->", line, col))
            i += 2
            col += 2
            continue
        m = _ATOM_RE.match(text, i)
        if m and m.start() == i:
            word = m.group()
            tokens.append(_Token("ident", word, line, col))
            i += len(word)
            col += len(word)
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Recursive descent parser


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.atom_sites: dict[Atom, tuple[int, int]] = {}

    @property
    def cur(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.cur
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        if self.cur.kind != kind:
            raise ParseError(
                f"expected {what}, found {self.cur.text!r}" if self.cur.text else f"expected {what}",
                self.cur.line,
                self.cur.col,
            )
        return self.advance()

    def parse_theory(self) -> QuantifiedTheory:
        entries: list[tuple[Quantifier, Atom]] = []
        seen: set[Atom] = set()
        while self.cur.kind == "ident" and self.cur.text in ("exists", "forall"):
            quant_tok = self.advance()
            quant = Quantifier(quant_tok.text)
            name_tok = self.expect("ident", "a variable name")
            if name_tok.text in KEYWORDS:
                raise ParseError(f"{name_tok.text!r} is reserved", name_tok.line, name_tok.col)
            atom = Atom(name_tok.text)
            if atom in seen:
                raise ParseError(f"duplicate binder variable {atom}", name_tok.line, name_tok.col)
            seen.add(atom)
            entries.append((quant, atom))
            self.expect("dot", "'.' after binder entry")
        formulas: list[Formula] = []
        while self.cur.kind != "eof":
            formulas.append(self.parse_impl())
            self.expect("dot", "'.' after formula")
        if not formulas:
            tok = self.cur
            raise ParseError("theory needs at least one formula", tok.line, tok.col)
        return QuantifiedTheory(Binder(tuple(entries)), tuple(formulas))

    def parse_impl(self) -> Formula:
        left = self.parse_disj()
        if self.cur.kind == "arrow":
            self.advance()
            return Implies(left, self.parse_impl())
        return left

    def parse_disj(self) -> Formula:
        f = self.parse_conj()
        while self.cur.kind == "or":
            self.advance()
            f = Or(f, self.parse_conj())
        return f

    def parse_conj(self) -> Formula:
        f = self.parse_neg()
        while self.cur.kind == "and":
            self.advance()
            f = And(f, self.parse_neg())
        return f

    def parse_neg(self) -> Formula:
        if self.cur.kind == "tilde":
            self.advance()
            return neg(self.parse_neg())
        return self.parse_atom()

    def parse_atom(self) -> Formula:
        tok = self.cur
        if tok.kind == "lparen":
            self.advance()
            f = self.parse_impl()
            self.expect("rparen", "')'")
            return f
        if tok.kind == "ident":
            self.advance()
            if tok.text in ("bot", "false"):
                return BOT
            if tok.text == "true":
                return TOP
            if tok.text in ("exists", "forall"):
                raise ParseError(f"{tok.text!r} is only allowed in the binder prefix", tok.line, tok.col)
            atom = Atom(tok.text)
            self.atom_sites.setdefault(atom, (tok.line, tok.col))
            return Var(atom)
        raise ParseError(
            f"expected a formula, found {tok.text!r}" if tok.text else "unexpected end of input",
            tok.line,
            tok.col,
        )


def parse_theory(text: str, allow_free: bool = False) -> QuantifiedTheory:
    """Parse a quantified theory.

    Atoms of the matrix must be bound by the binder unless ``allow_free``
    is set, in which case callers supply values for the free atoms through
    a conditioning interpretation.
    """
    parser = _Parser(text)
    theory = parser.parse_theory()
    if not allow_free:
        free = sorted(theory.free_atoms())
        if free:
            site = parser.atom_sites[free[0]]
            names = ", ".join(str(a) for a in free)
            raise ParseError(f"free variable(s) in matrix: {names}", site[0], site[1])
    return theory


def parse_formula(text: str) -> Formula:
    """Parse a single formula; a trailing '.' is optional."""
    parser = _Parser(text)
    f = parser.parse_impl()
    if parser.cur.kind == "dot":
        parser.advance()
    if parser.cur.kind != "eof":
        tok = parser.cur
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return f


# ---------------------------------------------------------------------------
# Printer

_PREC_IMPL = 1
_PREC_OR = 2
_PREC_AND = 3
_PREC_ATOM = 4


def print_formula(f: Formula) -> str:
    """Render with minimal parentheses; parse_formula inverts this exactly."""
    return _print(f, _PREC_IMPL)


def _print(f: Formula, min_prec: int) -> str:
    if f == TOP:
        return "true"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Var):
        return f.atom.name
    if isinstance(f, Implies) and f.right == BOT:
        return "~" + _print(f.left, _PREC_ATOM)
    if isinstance(f, And):
        text = f"{_print(f.left, _PREC_AND)} & {_print(f.right, _PREC_AND + 1)}"
        prec = _PREC_AND
    elif isinstance(f, Or):
        text = f"{_print(f.left, _PREC_OR)} | {_print(f.right, _PREC_OR + 1)}"
        prec = _PREC_OR
    elif isinstance(f, Implies):
        text = f"{_print(f.left, _PREC_IMPL + 1)} -> {_print(f.right, _PREC_IMPL)}"
        prec = _PREC_IMPL
    else:
        raise TypeError(f"not a formula: {f!r}")
    return text if prec >= min_prec else f"({text})"


def print_theory(theory: QuantifiedTheory) -> str:
    """Render a theory in the concrete syntax, one formula per line."""
    lines = []
    if theory.binder:
        lines.append(" ".join(f"{q} {a}." for q, a in theory.binder))
    lines.extend(f"{print_formula(f)}." for f in theory.matrix)
    return "\n".join(lines)
