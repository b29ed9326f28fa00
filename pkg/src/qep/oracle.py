"""Brute force reference for equilibrium policy extraction.

Checks every conforming binary policy against the defining recursion:
an existential node commits its value, a universal node must succeed on
both values, and every leaf interpretation reached this way must be an
equilibrium model of the matrix.  No elimination machinery is involved;
the decision path only uses direct evaluation and the equilibrium model
check, so agreement with the elimination result is meaningful evidence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import CapExceededError, NonConformingPolicyError
from .formula import Atom, Binder, Formula, Quantifier, QuantifiedTheory, variables
from .policy import (
    Configuration,
    ExistsNode,
    ForallNode,
    Leaf,
    Policy,
    enumerate_policies,
    members,
    sort_policies,
)
from .semantics import EPSILON, VALUES2, Interp, is_equilibrium_model

DEFAULT_ORACLE_CAP = 6


def is_equilibrium_configuration(
    m: Interp,
    pi: Policy,
    binder: Binder,
    matrix: Sequence[Formula],
    domain: frozenset[Atom] | None = None,
) -> bool:
    """Defining recursion for equilibrium configurations.

    The minimality check at each leaf ranges over the full accumulated
    domain: conditioning atoms, binder atoms and matrix atoms alike.
    """
    if domain is None:
        domain = m.domain | binder.atoms() | variables(matrix)
    cfg = Configuration(m, pi)
    if isinstance(cfg.policy, Leaf):
        if binder:
            raise NonConformingPolicyError(f"leaf reached with binder {binder} remaining")
        return (
            cfg.interp.defined_on(domain)
            and cfg.interp.is_crisp(domain)
            and is_equilibrium_model(cfg.interp, matrix, domain)
        )
    if not binder:
        raise NonConformingPolicyError(f"policy node {pi!r} with an empty binder")
    quant, atom = binder.head
    if isinstance(cfg.policy, ExistsNode):
        if quant is not Quantifier.EXISTS or cfg.policy.var != atom or cfg.policy.value not in VALUES2:
            raise NonConformingPolicyError(f"policy node {pi!r} does not match binder {binder}")
        return is_equilibrium_configuration(
            m.update(atom, cfg.policy.value), cfg.policy.sub, binder.tail, matrix, domain
        )
    if isinstance(cfg.policy, ForallNode):
        if quant is not Quantifier.FORALL or cfg.policy.var != atom or cfg.policy.values != VALUES2:
            raise NonConformingPolicyError(f"policy node {pi!r} does not match binder {binder}")
        return all(
            is_equilibrium_configuration(m.update(atom, v), sub, binder.tail, matrix, domain)
            for v, sub in cfg.policy.branches
        )
    raise TypeError(f"not a policy: {pi!r}")


@dataclass
class OracleResult:
    """Accepted policies plus, per policy, the equilibrium models its
    branches realize."""

    policies: frozenset[Policy]
    witness: Mapping[Policy, frozenset[Interp]] = field(default_factory=dict)

    def sorted_policies(self) -> list[Policy]:
        return sort_policies(self.policies)


def brute_equilibrium_policies(
    binder: Binder,
    matrix: Sequence[Formula],
    m: Interp = EPSILON,
    cap: int = DEFAULT_ORACLE_CAP,
) -> OracleResult:
    """Filter the whole binary policy universe.

    The universe is doubly exponential in universal nesting, hence the
    deliberately small cap; in practice more than four universal
    variables is out of reach.
    """
    if len(binder) > cap:
        raise CapExceededError(f"binder has {len(binder)} variables, oracle cap is {cap}")
    matrix = tuple(matrix)
    accepted: set[Policy] = set()
    witness: dict[Policy, frozenset[Interp]] = {}
    for pi in enumerate_policies(binder, ternary=False, cap=cap):
        if is_equilibrium_configuration(m, pi, binder, matrix):
            accepted.add(pi)
            witness[pi] = members(pi, binder, m)
    return OracleResult(frozenset(accepted), witness)


def brute_equilibrium_policies_for(theory: QuantifiedTheory, m: Interp = EPSILON,
                                   cap: int = DEFAULT_ORACLE_CAP) -> OracleResult:
    return brute_equilibrium_policies(theory.binder, theory.matrix, m, cap)
