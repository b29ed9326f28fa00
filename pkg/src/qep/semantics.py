"""Three valued interpretations and evaluation.

Truth values are the exact rationals 0 < 1/2 < 1 (`fractions.Fraction`).
Conjunction is min, disjunction is max, and implication evaluates to 1
when the antecedent is at most the consequent and to the consequent
otherwise; the two valued variant returns 0 in that second case.
A theory (list of formulas) takes the minimum over its members, so the
empty theory evaluates to 1.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import CapExceededError, NonCrispError, UndefinedAtomError
from .formula import (
    And,
    Atom,
    Binder,
    Bot,
    Formula,
    Implies,
    Or,
    Quantifier,
    Var,
    variables,
)

Value = Fraction

ZERO = Fraction(0)
HALF = Fraction(1, 2)
ONE = Fraction(1)

VALUES3: tuple[Value, ...] = (ZERO, HALF, ONE)
VALUES2: tuple[Value, ...] = (ZERO, ONE)

_VALUE_NAMES = {"0": ZERO, "1/2": HALF, "1": ONE}


def format_value(v: Value) -> str:
    return str(v)


def parse_value(text: str) -> Value:
    try:
        return _VALUE_NAMES[text.strip()]
    except KeyError:
        raise ValueError(f"not a truth value (expected 0, 1/2 or 1): {text!r}") from None


class Interp:
    """An immutable partial map from atoms to truth values.

    Serializes as a sorted comma separated list, e.g. ``x=1/2, z=0``.
    """

    __slots__ = ("_map", "_hash")

    def __init__(self, assignment: Union[Mapping[Atom, Value], Iterable[tuple[Atom, Value]]] = ()):
        items = dict(assignment)
        for atom, value in items.items():
            if not isinstance(atom, Atom):
                raise TypeError(f"not an atom: {atom!r}")
            if value not in VALUES3:
                raise ValueError(f"not a truth value: {value!r}")
        self._map: dict[Atom, Value] = items
        self._hash = hash(frozenset(items.items()))

    @classmethod
    def parse(cls, text: str) -> "Interp":
        """Parse ``x=1/2, z=0``; the empty string is the empty interpretation."""
        items: dict[Atom, Value] = {}
        text = text.strip()
        if not text:
            return cls()
        for part in text.split(","):
            name, eq, value = part.partition("=")
            if not eq:
                raise ValueError(f"expected atom=value, got {part.strip()!r}")
            try:
                atom = Atom(name.strip())
            except ValueError as exc:
                raise ValueError(str(exc)) from None
            if atom in items:
                raise ValueError(f"atom assigned twice: {atom}")
            items[atom] = parse_value(value)
        return cls(items)

    @property
    def domain(self) -> frozenset[Atom]:
        return frozenset(self._map)

    def value(self, atom: Atom) -> Value:
        try:
            return self._map[atom]
        except KeyError:
            raise UndefinedAtomError(f"atom {atom} is not assigned") from None

    def get(self, atom: Atom, default: Value | None = None) -> Value | None:
        return self._map.get(atom, default)

    def __contains__(self, atom: Atom) -> bool:
        return atom in self._map

    def __len__(self) -> int:
        return len(self._map)

    def items(self) -> Iterator[tuple[Atom, Value]]:
        return iter(sorted(self._map.items()))

    def update(self, atom: Atom, value: Value) -> "Interp":
        """Functional override at one atom."""
        if value not in VALUES3:
            raise ValueError(f"not a truth value: {value!r}")
        items = dict(self._map)
        items[atom] = value
        return Interp(items)

    def defined_on(self, atoms: Iterable[Atom]) -> bool:
        return all(a in self._map for a in atoms)

    def restrict(self, atoms: Iterable[Atom]) -> "Interp":
        keep = set(atoms)
        return Interp({a: v for a, v in self._map.items() if a in keep})

    def is_crisp(self, sigma: Iterable[Atom] | None = None) -> bool:
        """True when no atom (of sigma, if given) carries 1/2."""
        atoms = self._map if sigma is None else sigma
        return all(self.value(a) != HALF for a in atoms)

    def crisp(self, sigma: Iterable[Atom] | None = None) -> "Interp":
        """Lift 1/2 to 1 on sigma (default: everywhere), copy the rest."""
        lift = set(self._map if sigma is None else sigma)
        items = {
            a: (ONE if v == HALF and a in lift else v)
            for a, v in self._map.items()
        }
        return Interp(items)

    def agrees_with(self, other: "Interp", atoms: Iterable[Atom]) -> bool:
        return all(self.value(a) == other.value(a) for a in atoms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Interp):
            return NotImplemented
        return self._map == other._map

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return ", ".join(f"{a}={v}" for a, v in self.items())

    def __repr__(self) -> str:
        return f"Interp({{{self}}})"


EPSILON = Interp()


# ---------------------------------------------------------------------------
# Evaluation


def eval3(m: Interp, f: Formula) -> Value:
    """Three valued value of f under m; every atom of f must be assigned."""
    if isinstance(f, Bot):
        return ZERO
    if isinstance(f, Var):
        return m.value(f.atom)
    if isinstance(f, And):
        return min(eval3(m, f.left), eval3(m, f.right))
    if isinstance(f, Or):
        return max(eval3(m, f.left), eval3(m, f.right))
    if isinstance(f, Implies):
        a = eval3(m, f.left)
        b = eval3(m, f.right)
        return ONE if a <= b else b
    raise TypeError(f"not a formula: {f!r}")


def eval2(m: Interp, f: Formula) -> Value:
    """Classical value of f; raises NonCrispError if m reads 1/2 inside f."""
    if isinstance(f, Bot):
        return ZERO
    if isinstance(f, Var):
        v = m.value(f.atom)
        if v == HALF:
            raise NonCrispError(f"atom {f.atom} carries 1/2 in a two valued context")
        return v
    if isinstance(f, And):
        return min(eval2(m, f.left), eval2(m, f.right))
    if isinstance(f, Or):
        return max(eval2(m, f.left), eval2(m, f.right))
    if isinstance(f, Implies):
        a = eval2(m, f.left)
        b = eval2(m, f.right)
        return ONE if a <= b else ZERO
    raise TypeError(f"not a formula: {f!r}")


def eval_theory(m: Interp, gamma: Sequence[Formula], mode: str = "g3") -> Value:
    """Minimum over the members of gamma; the empty theory is 1."""
    if mode == "g3":
        fn = eval3
    elif mode == "classical":
        fn = eval2
    else:
        raise ValueError(f"unknown mode: {mode!r}")
    out = ONE
    for f in gamma:
        out = min(out, fn(m, f))
        if out == ZERO:
            break
    return out


def is_model(m: Interp, gamma: Sequence[Formula]) -> bool:
    return eval_theory(m, gamma) == ONE


# ---------------------------------------------------------------------------
# Orderings


class Ordering(Enum):
    EQUAL = "equal"
    LEQ = "leq"
    LT = "lt"
    INCOMPARABLE = "incomparable"


def cmp(m1: Interp, m2: Interp, sigma: Iterable[Atom] | None = None) -> Ordering:
    """Compare two interpretations over sigma (default: union of domains).

    EQUAL means pointwise equality.  LT is the strict relation: crisp
    projections over sigma agree, m1 is pointwise at most m2, and the two
    differ somewhere.  LEQ (equal or strictly below) is subsumed by the
    other two outcomes and never returned; it is kept so that callers can
    pattern match a total four way contract.
    """
    atoms = tuple(sigma) if sigma is not None else tuple(m1.domain | m2.domain)
    equal = True
    crisp_agree = True
    below = True
    for a in atoms:
        v1 = m1.value(a)
        v2 = m2.value(a)
        if v1 != v2:
            equal = False
        c1 = ONE if v1 == HALF else v1
        c2 = ONE if v2 == HALF else v2
        if c1 != c2:
            crisp_agree = False
        if v1 > v2:
            below = False
    if equal:
        return Ordering.EQUAL
    if crisp_agree and below:
        return Ordering.LT
    return Ordering.INCOMPARABLE


def lt(m1: Interp, m2: Interp, sigma: Iterable[Atom] | None = None) -> bool:
    return cmp(m1, m2, sigma) is Ordering.LT


def leq(m1: Interp, m2: Interp, sigma: Iterable[Atom] | None = None) -> bool:
    return cmp(m1, m2, sigma) in (Ordering.EQUAL, Ordering.LT)


# ---------------------------------------------------------------------------
# Equilibrium models

DEFAULT_DOMAIN_CAP = 20


def interpretations(domain: Iterable[Atom], values: Sequence[Value] = VALUES3) -> Iterator[Interp]:
    """All total interpretations over domain, in lexicographic atom order."""
    atoms = sorted(set(domain))
    for row in product(values, repeat=len(atoms)):
        yield Interp(zip(atoms, row))


def _strictly_below(m: Interp, domain: Sequence[Atom]) -> Iterator[Interp]:
    # Interpretations strictly below a crisp m: drop some 1s to 1/2.
    ones = [a for a in domain if m.value(a) == ONE]
    for row in product((HALF, ONE), repeat=len(ones)):
        if all(v == ONE for v in row):
            continue
        out = m
        for a, v in zip(ones, row):
            out = out.update(a, v)
        yield out


def is_equilibrium_model(m: Interp, gamma: Sequence[Formula], domain: Iterable[Atom] | None = None) -> bool:
    """Crisp total model of gamma with no model strictly below it on domain."""
    atoms = sorted(set(domain)) if domain is not None else sorted(m.domain)
    if not m.defined_on(atoms) or not m.is_crisp(atoms):
        return False
    if not is_model(m, gamma):
        return False
    probe = m.restrict(atoms)
    outside = {a: m.value(a) for a in m.domain if a not in set(atoms)}
    for below in _strictly_below(probe, atoms):
        candidate = Interp({**outside, **{a: below.value(a) for a in atoms}})
        if is_model(candidate, gamma):
            return False
    return True


def equilibrium_models(
    gamma: Sequence[Formula],
    domain: Iterable[Atom],
    cap: int = DEFAULT_DOMAIN_CAP,
) -> frozenset[Interp]:
    """All equilibrium models of gamma over domain (must cover its atoms)."""
    atoms = frozenset(domain)
    if len(atoms) > cap:
        raise CapExceededError(f"domain has {len(atoms)} atoms, cap is {cap}")
    missing = variables(gamma) - atoms
    if missing:
        names = ", ".join(str(a) for a in sorted(missing))
        raise ValueError(f"domain does not cover the matrix atoms: {names}")
    out = set()
    for m in interpretations(atoms, VALUES2):
        if is_model(m, gamma) and is_equilibrium_model(m, gamma, atoms):
            out.add(m)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Quantified three valued value


def eval_qg3(m: Interp, binder: Binder, matrix: Union[Formula, Sequence[Formula]]) -> Value:
    """Value of the quantified theory: forall takes min, exists takes max
    over the three possible values of the bound variable."""
    gamma = (matrix,) if isinstance(matrix, Formula) else tuple(matrix)
    return _eval_qg3(m, binder, gamma)


def _eval_qg3(m: Interp, binder: Binder, gamma: tuple[Formula, ...]) -> Value:
    if not binder:
        return eval_theory(m, gamma)
    quant, atom = binder.head
    tail = binder.tail
    vals = (_eval_qg3(m.update(atom, v), tail, gamma) for v in VALUES3)
    return min(vals) if quant is Quantifier.FORALL else max(vals)
