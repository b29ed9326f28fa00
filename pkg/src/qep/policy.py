"""Policy trees: strategies that fix existential variables and branch on
universal ones.

A policy over a binder mirrors its quantifier prefix: an existential
entry becomes a node carrying one chosen value and a single subtree, a
universal entry becomes a node with one subtree per possible value of
the variable, and the empty binder is the leaf.  Binary policies use the
values {0, 1}; ternary policies use {0, 1/2, 1}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence, Union

from .errors import CapExceededError, NonConformingPolicyError
from .formula import Atom, Binder, Formula, Quantifier
from .semantics import (
    EPSILON,
    HALF,
    ONE,
    VALUES2,
    VALUES3,
    ZERO,
    Interp,
    Value,
    eval_theory,
    format_value,
    parse_value,
)

DEFAULT_ENUM_CAP = 8


class Policy:
    """Base class of policy trees; instances are frozen and hashable."""

    __slots__ = ()


@dataclass(frozen=True)
class Leaf(Policy):
    pass


@dataclass(frozen=True)
class ExistsNode(Policy):
    var: Atom
    value: Value
    sub: Policy

    def __post_init__(self) -> None:
        if self.value not in VALUES3:
            raise ValueError(f"not a truth value: {self.value!r}")


@dataclass(frozen=True)
class ForallNode(Policy):
    var: Atom
    branches: tuple[tuple[Value, Policy], ...]

    def __post_init__(self) -> None:
        values = tuple(v for v, _ in self.branches)
        if values not in (VALUES2, VALUES3):
            raise ValueError(f"branch values must be (0, 1) or (0, 1/2, 1), got {values!r}")

    def branch(self, value: Value) -> Policy | None:
        for v, sub in self.branches:
            if v == value:
                return sub
        return None

    @property
    def values(self) -> tuple[Value, ...]:
        return tuple(v for v, _ in self.branches)


LEAF = Leaf()


def exists_node(var: Union[Atom, str], value: Value, sub: Policy = LEAF) -> ExistsNode:
    return ExistsNode(Atom(var) if isinstance(var, str) else var, value, sub)


def forall2(var: Union[Atom, str], sub0: Policy, sub1: Policy) -> ForallNode:
    atom = Atom(var) if isinstance(var, str) else var
    return ForallNode(atom, ((ZERO, sub0), (ONE, sub1)))


def forall3(var: Union[Atom, str], sub0: Policy, sub_half: Policy, sub1: Policy) -> ForallNode:
    atom = Atom(var) if isinstance(var, str) else var
    return ForallNode(atom, ((ZERO, sub0), (HALF, sub_half), (ONE, sub1)))


@dataclass(frozen=True)
class Configuration:
    """An interpretation paired with a policy."""

    interp: Interp
    policy: Policy


# ---------------------------------------------------------------------------
# Structure checks


def is_binary(pi: Policy) -> bool:
    if isinstance(pi, Leaf):
        return True
    if isinstance(pi, ExistsNode):
        return pi.value in VALUES2 and is_binary(pi.sub)
    if isinstance(pi, ForallNode):
        return pi.values == VALUES2 and all(is_binary(s) for _, s in pi.branches)
    raise TypeError(f"not a policy: {pi!r}")


def conforms(pi: Policy, binder: Binder, ternary: bool = False) -> bool:
    """Does the tree mirror the binder, with the right value alphabet?"""
    values = VALUES3 if ternary else VALUES2
    if not binder:
        return isinstance(pi, Leaf)
    quant, atom = binder.head
    tail = binder.tail
    if quant is Quantifier.EXISTS:
        return (
            isinstance(pi, ExistsNode)
            and pi.var == atom
            and pi.value in values
            and conforms(pi.sub, tail, ternary)
        )
    return (
        isinstance(pi, ForallNode)
        and pi.var == atom
        and pi.values == values
        and all(conforms(sub, tail, ternary) for _, sub in pi.branches)
    )


def _mismatch(pi: Policy, binder: Binder) -> NonConformingPolicyError:
    expected = f"binder {binder}" if binder else "the empty binder"
    return NonConformingPolicyError(f"policy node {pi!r} does not match {expected}")


# ---------------------------------------------------------------------------
# Satisfaction


def sat_classical(m: Interp, pi: Policy, binder: Binder, matrix: Sequence[Formula]) -> bool:
    """Two valued satisfaction: binary branching, classical check at the leaf."""
    if isinstance(pi, Leaf):
        if binder:
            raise _mismatch(pi, binder)
        return eval_theory(m, matrix, "classical") == ONE
    quant, atom = binder.head if binder else (None, None)
    if isinstance(pi, ExistsNode):
        if quant is not Quantifier.EXISTS or pi.var != atom or pi.value not in VALUES2:
            raise _mismatch(pi, binder)
        return sat_classical(m.update(atom, pi.value), pi.sub, binder.tail, matrix)
    if isinstance(pi, ForallNode):
        if quant is not Quantifier.FORALL or pi.var != atom or pi.values != VALUES2:
            raise _mismatch(pi, binder)
        return all(
            sat_classical(m.update(atom, v), sub, binder.tail, matrix)
            for v, sub in pi.branches
        )
    raise TypeError(f"not a policy: {pi!r}")


def sat_qg3(m: Interp, pi: Policy, binder: Binder, matrix: Sequence[Formula]) -> bool:
    """Three valued satisfaction for ternary policies: the leaf theory must
    reach value 1 along every branch the tree commits to."""
    if isinstance(pi, Leaf):
        if binder:
            raise _mismatch(pi, binder)
        return eval_theory(m, matrix, "g3") == ONE
    quant, atom = binder.head if binder else (None, None)
    if isinstance(pi, ExistsNode):
        if quant is not Quantifier.EXISTS or pi.var != atom:
            raise _mismatch(pi, binder)
        return sat_qg3(m.update(atom, pi.value), pi.sub, binder.tail, matrix)
    if isinstance(pi, ForallNode):
        if quant is not Quantifier.FORALL or pi.var != atom or pi.values != VALUES3:
            raise _mismatch(pi, binder)
        return all(
            sat_qg3(m.update(atom, v), sub, binder.tail, matrix)
            for v, sub in pi.branches
        )
    raise TypeError(f"not a policy: {pi!r}")


def sat_mixed(m: Interp, pi: Policy, binder: Binder, matrix: Sequence[Formula]) -> bool:
    """Binary branching over a possibly non crisp base interpretation, with
    the three valued check at the leaf.  This is the reading under which
    the elimination procedure collects its intermediate policies."""
    if isinstance(pi, Leaf):
        if binder:
            raise _mismatch(pi, binder)
        return eval_theory(m, matrix, "g3") == ONE
    quant, atom = binder.head if binder else (None, None)
    if isinstance(pi, ExistsNode):
        if quant is not Quantifier.EXISTS or pi.var != atom or pi.value not in VALUES2:
            raise _mismatch(pi, binder)
        return sat_mixed(m.update(atom, pi.value), pi.sub, binder.tail, matrix)
    if isinstance(pi, ForallNode):
        if quant is not Quantifier.FORALL or pi.var != atom or pi.values != VALUES2:
            raise _mismatch(pi, binder)
        return all(
            sat_mixed(m.update(atom, v), sub, binder.tail, matrix)
            for v, sub in pi.branches
        )
    raise TypeError(f"not a policy: {pi!r}")


# ---------------------------------------------------------------------------
# Membership


def member_of(m: Interp, pi: Policy, binder: Binder) -> bool:
    """Is m one of the total assignments the policy can realize?

    Existential nodes pin the variable to their chosen value; universal
    nodes follow the branch labelled with m's value of the variable and
    reject values with no branch in the tree.
    """
    if isinstance(pi, Leaf):
        if binder:
            raise _mismatch(pi, binder)
        return True
    quant, atom = binder.head if binder else (None, None)
    if isinstance(pi, ExistsNode):
        if quant is not Quantifier.EXISTS or pi.var != atom:
            raise _mismatch(pi, binder)
        return m.value(atom) == pi.value and member_of(m, pi.sub, binder.tail)
    if isinstance(pi, ForallNode):
        if quant is not Quantifier.FORALL or pi.var != atom:
            raise _mismatch(pi, binder)
        sub = pi.branch(m.value(atom))
        return sub is not None and member_of(m, sub, binder.tail)
    raise TypeError(f"not a policy: {pi!r}")


def members(pi: Policy, binder: Binder, m: Interp = EPSILON) -> frozenset[Interp]:
    """All completions of m along the policy's branches."""
    if isinstance(pi, Leaf):
        if binder:
            raise _mismatch(pi, binder)
        return frozenset({m})
    quant, atom = binder.head if binder else (None, None)
    if isinstance(pi, ExistsNode):
        if quant is not Quantifier.EXISTS or pi.var != atom:
            raise _mismatch(pi, binder)
        return members(pi.sub, binder.tail, m.update(atom, pi.value))
    if isinstance(pi, ForallNode):
        if quant is not Quantifier.FORALL or pi.var != atom:
            raise _mismatch(pi, binder)
        out: set[Interp] = set()
        for v, sub in pi.branches:
            out |= members(sub, binder.tail, m.update(atom, v))
        return frozenset(out)
    raise TypeError(f"not a policy: {pi!r}")


# ---------------------------------------------------------------------------
# Enumeration


def policy_count(binder: Binder, ternary: bool = False) -> int:
    """Number of conforming policies: an existential entry multiplies by the
    alphabet size, a universal entry raises to its power."""
    k = 3 if ternary else 2
    n = 1
    for quant, _ in reversed(binder.entries):
        n = k * n if quant is Quantifier.EXISTS else n**k
    return n


def enumerate_policies(
    binder: Binder,
    ternary: bool = False,
    cap: int = DEFAULT_ENUM_CAP,
) -> Iterator[Policy]:
    """All conforming policies in canonical order (values ascending, then
    lexicographic on subtrees).  The cap bounds the binder length."""
    if len(binder) > cap:
        raise CapExceededError(f"binder has {len(binder)} variables, cap is {cap}")
    return _enumerate(binder, VALUES3 if ternary else VALUES2)


def _enumerate(binder: Binder, values: tuple[Value, ...]) -> Iterator[Policy]:
    if not binder:
        yield LEAF
        return
    quant, atom = binder.head
    tail = binder.tail
    if quant is Quantifier.EXISTS:
        for v in values:
            for sub in _enumerate(tail, values):
                yield ExistsNode(atom, v, sub)
    else:
        subs = list(_enumerate(tail, values))
        for combo in product(subs, repeat=len(values)):
            yield ForallNode(atom, tuple(zip(values, combo)))


def canonical_key(pi: Policy) -> tuple:
    """Sort key: preorder walk with values ascending."""
    if isinstance(pi, Leaf):
        return (0,)
    if isinstance(pi, ExistsNode):
        return (1, pi.var.name, pi.value, canonical_key(pi.sub))
    if isinstance(pi, ForallNode):
        return (2, pi.var.name) + tuple(canonical_key(sub) for _, sub in pi.branches)
    raise TypeError(f"not a policy: {pi!r}")


def sort_policies(policies: Iterable[Policy]) -> list[Policy]:
    return sorted(policies, key=canonical_key)


# ---------------------------------------------------------------------------
# Rendering


def compact(pi: Policy) -> str:
    """One line form: x=1;z=0;lambda or x(zero branch, ..., one branch)."""
    if isinstance(pi, Leaf):
        return "lambda"
    if isinstance(pi, ExistsNode):
        return f"{pi.var}={format_value(pi.value)};{compact(pi.sub)}"
    if isinstance(pi, ForallNode):
        inner = ", ".join(compact(sub) for _, sub in pi.branches)
        return f"{pi.var}({inner})"
    raise TypeError(f"not a policy: {pi!r}")


def _text_lines(pi: Policy, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(pi, Leaf):
        return [pad + "lambda"]
    lines = [pad + str(pi.var)]
    if isinstance(pi, ExistsNode):
        edges = [(pi.value, pi.sub)]
    else:
        edges = list(pi.branches)
    for v, sub in edges:
        sub_lines = _text_lines(sub, indent + 2)
        head = sub_lines[0].lstrip()
        lines.append(f"{pad}  {format_value(v)}: {head}")
        lines.extend(sub_lines[1:])
    return lines


def to_json_dict(pi: Policy) -> dict:
    """JSON form: kind leaf | exists (var, value, sub) | forall (var, branches)."""
    if isinstance(pi, Leaf):
        return {"kind": "leaf"}
    if isinstance(pi, ExistsNode):
        return {
            "kind": "exists",
            "var": pi.var.name,
            "value": format_value(pi.value),
            "sub": to_json_dict(pi.sub),
        }
    if isinstance(pi, ForallNode):
        return {
            "kind": "forall",
            "var": pi.var.name,
            "branches": {format_value(v): to_json_dict(sub) for v, sub in pi.branches},
        }
    raise TypeError(f"not a policy: {pi!r}")


def policy_from_json(data: dict) -> Policy:
    kind = data.get("kind")
    if kind == "leaf":
        return LEAF
    if kind == "exists":
        return ExistsNode(
            Atom(data["var"]),
            parse_value(data["value"]),
            policy_from_json(data["sub"]),
        )
    if kind == "forall":
        branches = tuple(
            (parse_value(v), policy_from_json(sub))
            for v, sub in sorted(data["branches"].items(), key=lambda kv: parse_value(kv[0]))
        )
        return ForallNode(Atom(data["var"]), branches)
    raise ValueError(f"unknown policy kind: {kind!r}")


def _dot_lines(pi: Policy, counter: list[int], lines: list[str]) -> int:
    idx = counter[0]
    counter[0] += 1
    if isinstance(pi, Leaf):
        lines.append(f'  n{idx} [label="lambda", shape=plaintext];')
        return idx
    lines.append(f'  n{idx} [label="{pi.var}"];')
    edges = [(pi.value, pi.sub)] if isinstance(pi, ExistsNode) else list(pi.branches)
    for v, sub in edges:
        child = _dot_lines(sub, counter, lines)
        lines.append(f'  n{idx} -> n{child} [label="{format_value(v)}"];')
    return idx


def to_dot(policies: Union[Policy, Iterable[Policy]], name: str = "policies") -> str:
    """Graphviz digraph; node ids are preorder indices across all trees."""
    if isinstance(policies, Policy):
        policies = [policies]
    lines = [f"digraph {name} {{"]
    counter = [0]
    for pi in policies:
        _dot_lines(pi, counter, lines)
    lines.append("}")
    return "\n".join(lines)


def render(pi: Policy, fmt: str = "text") -> str:
    """Render one policy as indented text, JSON or Graphviz dot."""
    if fmt == "text":
        return "\n".join(_text_lines(pi, 0))
    if fmt == "json":
        return json.dumps(to_json_dict(pi), indent=2)
    if fmt == "dot":
        return to_dot(pi)
    raise ValueError(f"unknown format: {fmt!r}")
