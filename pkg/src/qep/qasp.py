"""Quantified satisfiability over equilibrium models, under two rival
readings of what it means to fix an existential or universal variable.

Fixing a variable x to a value augments the matrix with an extra formula
before the equilibrium check at the innermost level:

  * value 0 augments with ~x under both readings;
  * value 1 augments with ~~x under the double negation reading
    (``FANDINNO``) and with the plain atom x under the strong reading
    (``STEPHAN``).

The double negation reading only constrains the candidate model, while
the strong reading also provides support for x.  Every theory
satisfiable under the first is satisfiable under the second, but not
conversely, and the two can accept different policies even when both
report satisfiable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from .errors import CapExceededError
from .formula import Atom, Binder, Formula, Quantifier, QuantifiedTheory, Var, neg, variables
from .policy import (
    LEAF,
    ExistsNode,
    Policy,
    forall2,
    sort_policies,
    to_json_dict,
)
from .semantics import ONE, ZERO, equilibrium_models

DEFAULT_BINDER_CAP = 8


class SemanticsKind(Enum):
    FANDINNO = "fandinno"
    STEPHAN = "stephan"


def _augmentation(kind: SemanticsKind, atom: Atom, value) -> Formula:
    if value == ZERO:
        return neg(Var(atom))
    if kind is SemanticsKind.FANDINNO:
        return neg(neg(Var(atom)))
    return Var(atom)


def _check(theory: QuantifiedTheory, cap: int) -> frozenset[Atom]:
    if len(theory.binder) > cap:
        raise CapExceededError(f"binder has {len(theory.binder)} variables, cap is {cap}")
    free = theory.free_atoms()
    if free:
        names = ", ".join(str(a) for a in sorted(free))
        raise ValueError(f"matrix atoms not bound by the binder: {names}")
    return variables(theory.matrix) | theory.binder.atoms()


def sat_qasp(theory: QuantifiedTheory, kind: SemanticsKind, cap: int = DEFAULT_BINDER_CAP) -> bool:
    """Recursive satisfiability: exists picks one value, forall needs both."""
    domain = _check(theory, cap)

    def rec(binder: Binder, gamma: tuple[Formula, ...]) -> bool:
        if not binder:
            return bool(equilibrium_models(gamma, domain))
        quant, atom = binder.head
        with_zero = gamma + (_augmentation(kind, atom, ZERO),)
        with_one = gamma + (_augmentation(kind, atom, ONE),)
        if quant is Quantifier.EXISTS:
            return rec(binder.tail, with_one) or rec(binder.tail, with_zero)
        return rec(binder.tail, with_zero) and rec(binder.tail, with_one)

    return rec(theory.binder, theory.matrix)


def accepted_policies(
    theory: QuantifiedTheory,
    kind: SemanticsKind,
    cap: int = DEFAULT_BINDER_CAP,
) -> frozenset[Policy]:
    """All binary policies whose every committed branch passes the
    augmented equilibrium check at the leaf."""
    domain = _check(theory, cap)

    def rec(binder: Binder, gamma: tuple[Formula, ...]) -> frozenset[Policy]:
        if not binder:
            return frozenset({LEAF}) if equilibrium_models(gamma, domain) else frozenset()
        quant, atom = binder.head
        zeros = rec(binder.tail, gamma + (_augmentation(kind, atom, ZERO),))
        ones = rec(binder.tail, gamma + (_augmentation(kind, atom, ONE),))
        if quant is Quantifier.EXISTS:
            out = {ExistsNode(atom, ZERO, s) for s in zeros}
            out |= {ExistsNode(atom, ONE, s) for s in ones}
            return frozenset(out)
        return frozenset(forall2(atom, s0, s1) for s0 in zeros for s1 in ones)

    return rec(theory.binder, theory.matrix)


@dataclass(frozen=True)
class SemanticsReport:
    """Satisfiability and accepted policies under both readings."""

    fandinno_sat: bool
    stephan_sat: bool
    fandinno_policies: frozenset[Policy]
    stephan_policies: frozenset[Policy]

    @cached_property
    def only_fandinno(self) -> frozenset[Policy]:
        return self.fandinno_policies - self.stephan_policies

    @cached_property
    def only_stephan(self) -> frozenset[Policy]:
        return self.stephan_policies - self.fandinno_policies

    def identical(self) -> bool:
        return (
            self.fandinno_sat == self.stephan_sat
            and self.fandinno_policies == self.stephan_policies
        )

    def to_json_dict(self) -> dict:
        return {
            "fandinno": {
                "sat": self.fandinno_sat,
                "policies": [to_json_dict(p) for p in sort_policies(self.fandinno_policies)],
            },
            "stephan": {
                "sat": self.stephan_sat,
                "policies": [to_json_dict(p) for p in sort_policies(self.stephan_policies)],
            },
            "only_stephan": [to_json_dict(p) for p in sort_policies(self.only_stephan)],
            "only_fandinno": [to_json_dict(p) for p in sort_policies(self.only_fandinno)],
        }


def compare_semantics(theory: QuantifiedTheory, cap: int = DEFAULT_BINDER_CAP) -> SemanticsReport:
    """Run both readings side by side.

    Satisfiability under the double negation reading implies it under the
    strong one; a report violating that would mean a solver defect, so it
    is rejected loudly rather than returned.
    """
    report = SemanticsReport(
        fandinno_sat=sat_qasp(theory, SemanticsKind.FANDINNO, cap),
        stephan_sat=sat_qasp(theory, SemanticsKind.STEPHAN, cap),
        fandinno_policies=accepted_policies(theory, SemanticsKind.FANDINNO, cap),
        stephan_policies=accepted_policies(theory, SemanticsKind.STEPHAN, cap),
    )
    if report.fandinno_sat and not report.stephan_sat:
        raise RuntimeError(
            "internal invariant violated: satisfiable under the double negation "
            "reading but not under the strong one"
        )
    return report
