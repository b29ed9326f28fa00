"""Quantifier elimination that extracts equilibrium policies directly.

Variables are eliminated outermost first.  For a binder remainder Q and
a conditioning interpretation m (fixing the already eliminated
variables), the intermediate result is a pair:

  * ``policies``: binary policies pi over Q such that every branch of pi
    completes m into a three valued model of the matrix (``sat_mixed``);
  * ``noncrisp``: non crisp models of the matrix that agree with m
    outside Q.  They are carried along because a non crisp model lying
    strictly below a crisp one disqualifies it from being an equilibrium
    model, possibly only after more variables have been fixed.

At the top level, with the whole binder still to eliminate and a crisp
(usually empty) conditioning, ``policies`` is exactly the set of
equilibrium policies of the theory.

A policy whose conditioning carries 1/2 somewhere can never itself reach
an equilibrium leaf; its only role is to veto other policies.  Each such
policy is interchangeable with the set of interpretations it realizes,
so merging may fold it into ``noncrisp``.  This implementation keeps the
recursion uniform (bases populate ``policies`` even under a non crisp
conditioning) and folds at merge time; ``folded`` exposes the equivalent
all-interpretations view of a pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .errors import CapExceededError, UndefinedAtomError
from .formula import Atom, Binder, Formula, Quantifier, QuantifiedTheory, variables
from .policy import (
    LEAF,
    ExistsNode,
    Policy,
    conforms,
    forall2,
    member_of,
    members,
    sat_mixed,
)
from .semantics import (
    EPSILON,
    HALF,
    ONE,
    ZERO,
    Interp,
    eval_theory,
    is_equilibrium_model,
    lt,
)

DEFAULT_BINDER_CAP = 8

TraceFn = Callable[[str], None]


@dataclass(frozen=True)
class ThetaPair:
    """One intermediate elimination result."""

    policies: frozenset[Policy]
    noncrisp: frozenset[Interp]


EMPTY_PAIR = ThetaPair(frozenset(), frozenset())


# ---------------------------------------------------------------------------
# Base cases: one variable left


def qem_base_exists(atom: Atom, matrix: Sequence[Formula], m: Interp) -> ThetaPair:
    """Eliminate a final existential variable.

    Fixing the variable to 1 only counts when the 1/2 assignment does not
    already yield a model: a model at 1/2 lies strictly below the same
    assignment at 1 and would always disqualify it.
    """
    at_half = m.update(atom, HALF)
    v_half = eval_theory(at_half, matrix)
    policies: set[Policy] = set()
    noncrisp: set[Interp] = set()
    if v_half == ONE:
        noncrisp.add(at_half)
    if eval_theory(m.update(atom, ZERO), matrix) == ONE:
        policies.add(ExistsNode(atom, ZERO, LEAF))
    if v_half <= HALF and eval_theory(m.update(atom, ONE), matrix) == ONE:
        policies.add(ExistsNode(atom, ONE, LEAF))
    return ThetaPair(frozenset(policies), frozenset(noncrisp))


def qem_base_forall(atom: Atom, matrix: Sequence[Formula], m: Interp) -> ThetaPair:
    """Eliminate a final universal variable.

    The single candidate policy branches on both values; it survives iff
    both crisp assignments are models and the 1/2 assignment is not
    (otherwise that model undercuts the 1 branch).  When it does not
    survive, any models among the three assignments are kept as vetoes,
    crisp ones only if the conditioning makes them non crisp overall.
    """
    at_zero = m.update(atom, ZERO)
    at_half = m.update(atom, HALF)
    at_one = m.update(atom, ONE)
    v_zero = eval_theory(at_zero, matrix)
    v_half = eval_theory(at_half, matrix)
    v_one = eval_theory(at_one, matrix)
    if v_zero == ONE and v_half <= HALF and v_one == ONE:
        return ThetaPair(frozenset({forall2(atom, LEAF, LEAF)}), frozenset())
    noncrisp: set[Interp] = set()
    if v_half == ONE:
        noncrisp.add(at_half)
    if v_zero == ONE and not at_zero.is_crisp():
        noncrisp.add(at_zero)
    if v_one == ONE and not at_one.is_crisp():
        noncrisp.add(at_one)
    return ThetaPair(frozenset(), frozenset(noncrisp))


# ---------------------------------------------------------------------------
# Merge operators: combine the three one-value-deeper results


def _survives(
    pi: Policy,
    half: ThetaPair,
    binder_rest: Binder,
    m_at_one: Interp,
) -> bool:
    # A policy from the 1 branch survives iff none of its realized
    # interpretations is undercut by the 1/2 branch, either by lying
    # strictly above a carried non crisp model or by being realized by a
    # 1/2 policy (whose leaf then witnesses a smaller model).
    for m1 in members(pi, binder_rest, m_at_one):
        if any(lt(h, m1) for h in half.noncrisp):
            return False
        if any(member_of(m1, other, binder_rest) for other in half.policies):
            return False
    return True


def _merge_noncrisp(
    zero: ThetaPair,
    half: ThetaPair,
    one: ThetaPair,
    binder_rest: Binder,
    m_at_half: Interp,
) -> frozenset[Interp]:
    out = set(zero.noncrisp) | set(half.noncrisp) | set(one.noncrisp)
    for pi in half.policies:
        out |= members(pi, binder_rest, m_at_half)
    return frozenset(out)


def merge_exists(
    atom: Atom,
    zero: ThetaPair,
    half: ThetaPair,
    one: ThetaPair,
    binder_rest: Binder,
    matrix: Sequence[Formula],
    m: Interp,
) -> ThetaPair:
    """Combine sub-results for an existential variable.

    The 0 branch passes through unconditionally (nothing with the
    variable at 1/2 or 1 compares to it).  The 1 branch is filtered
    against the 1/2 results.  Policies found under the 1/2 conditioning
    are folded into the carried non crisp models.
    """
    policies: set[Policy] = {ExistsNode(atom, ZERO, pi) for pi in zero.policies}
    m_at_one = m.update(atom, ONE)
    policies |= {
        ExistsNode(atom, ONE, pi)
        for pi in one.policies
        if _survives(pi, half, binder_rest, m_at_one)
    }
    noncrisp = _merge_noncrisp(zero, half, one, binder_rest, m.update(atom, HALF))
    return ThetaPair(frozenset(policies), noncrisp)


def merge_forall(
    atom: Atom,
    zero: ThetaPair,
    half: ThetaPair,
    one: ThetaPair,
    binder_rest: Binder,
    matrix: Sequence[Formula],
    m: Interp,
) -> ThetaPair:
    """Combine sub-results for a universal variable: pair every surviving
    1 subtree with every 0 subtree."""
    m_at_one = m.update(atom, ONE)
    kept = [pi for pi in one.policies if _survives(pi, half, binder_rest, m_at_one)]
    policies = frozenset(
        forall2(atom, p0, p1) for p0 in zero.policies for p1 in kept
    )
    noncrisp = _merge_noncrisp(zero, half, one, binder_rest, m.update(atom, HALF))
    return ThetaPair(policies, noncrisp)


# ---------------------------------------------------------------------------
# The full elimination


def qem(
    binder: Binder,
    matrix: Sequence[Formula],
    m: Interp = EPSILON,
    *,
    cap: int = DEFAULT_BINDER_CAP,
    prune: bool = False,
    validate: bool = False,
    trace: Optional[TraceFn] = None,
) -> ThetaPair:
    """Eliminate a non empty binder over the matrix, conditioned by m.

    m must assign every matrix atom not bound by the binder.  With
    ``prune`` set, carried non crisp models that are dominated by another
    carried model are dropped at each level; this does not change the
    resulting policies.  ``validate`` rechecks the defining properties of
    every intermediate pair (slow, for debugging).  ``trace`` receives
    one line per elimination step.
    """
    if not binder:
        raise ValueError("binder must be non empty; see equilibrium_policies")
    if len(binder) > cap:
        raise CapExceededError(f"binder has {len(binder)} variables, cap is {cap}")
    matrix = tuple(matrix)
    missing = variables(matrix) - binder.atoms() - m.domain
    if missing:
        names = ", ".join(str(a) for a in sorted(missing))
        raise UndefinedAtomError(f"conditioning does not assign: {names}")
    return _qem(binder, matrix, m, prune, validate, trace)


def _qem(
    binder: Binder,
    matrix: tuple[Formula, ...],
    m: Interp,
    prune: bool,
    validate: bool,
    trace: Optional[TraceFn],
) -> ThetaPair:
    quant, atom = binder.head
    tail = binder.tail
    if not tail:
        if quant is Quantifier.EXISTS:
            pair = qem_base_exists(atom, matrix, m)
        else:
            pair = qem_base_forall(atom, matrix, m)
    else:
        zero = _qem(tail, matrix, m.update(atom, ZERO), prune, validate, trace)
        half = _qem(tail, matrix, m.update(atom, HALF), prune, validate, trace)
        one = _qem(tail, matrix, m.update(atom, ONE), prune, validate, trace)
        merge = merge_exists if quant is Quantifier.EXISTS else merge_forall
        pair = merge(atom, zero, half, one, tail, matrix, m)
    if prune:
        pair = ThetaPair(pair.policies, prune_noncrisp(pair.noncrisp))
    if validate:
        validate_theta_pair(pair, binder, matrix, m)
    if trace is not None:
        trace(f"QEM {binder} | m={m} -> |T|={len(pair.policies)} |HC|={len(pair.noncrisp)}")
    return pair


def prune_noncrisp(noncrisp: Iterable[Interp]) -> frozenset[Interp]:
    """Keep only the minimal carried models.  Domination is transitive, so
    anything a dropped model would veto is still vetoed by a kept one."""
    pool = list(noncrisp)
    return frozenset(
        m1 for m1 in pool if not any(lt(m2, m1) for m2 in pool)
    )


def folded(pair: ThetaPair, binder: Binder, m: Interp) -> ThetaPair:
    """The all-interpretations view of a pair under a non crisp conditioning.

    Every policy collected under a conditioning that carries 1/2 is
    equivalent to the set of interpretations it realizes: each realized
    interpretation keeps the 1/2 and is itself a non crisp model.  Under
    a crisp conditioning the pair is returned unchanged.
    """
    if m.is_crisp():
        return pair
    out = set(pair.noncrisp)
    for pi in pair.policies:
        out |= members(pi, binder, m)
    return ThetaPair(frozenset(), frozenset(out))


def validate_theta_pair(
    pair: ThetaPair,
    binder: Binder,
    matrix: Sequence[Formula],
    m: Interp,
) -> None:
    """Recheck the defining properties of an intermediate pair."""
    outside = m.domain - binder.atoms()
    for pi in pair.policies:
        if not conforms(pi, binder):
            raise AssertionError(f"non conforming policy in pair: {pi!r}")
        if not sat_mixed(m, pi, binder, tuple(matrix)):
            raise AssertionError(f"policy does not satisfy the matrix: {pi!r}")
    for h in pair.noncrisp:
        if h.is_crisp():
            raise AssertionError(f"crisp interpretation carried as non crisp: {h}")
        if eval_theory(h, matrix) != ONE:
            raise AssertionError(f"carried interpretation is not a model: {h}")
        if not h.agrees_with(m, outside):
            raise AssertionError(f"carried model disagrees with the conditioning: {h}")


def equilibrium_policies(
    theory: QuantifiedTheory,
    conditioning: Interp = EPSILON,
    *,
    cap: int = DEFAULT_BINDER_CAP,
    prune: bool = False,
    validate: bool = False,
    trace: Optional[TraceFn] = None,
) -> ThetaPair:
    """Equilibrium policies of a theory, with the carried non crisp models
    as a diagnostic by-product.

    For an empty binder the policy universe is the bare leaf, which is an
    equilibrium policy iff the conditioning is an equilibrium model of
    the matrix over its own domain.
    """
    if not theory.binder:
        missing = variables(theory.matrix) - conditioning.domain
        if missing:
            names = ", ".join(str(a) for a in sorted(missing))
            raise UndefinedAtomError(f"conditioning does not assign: {names}")
        ok = is_equilibrium_model(conditioning, theory.matrix, conditioning.domain)
        return ThetaPair(frozenset({LEAF}) if ok else frozenset(), frozenset())
    return qem(
        theory.binder,
        theory.matrix,
        conditioning,
        cap=cap,
        prune=prune,
        validate=validate,
        trace=trace,
    )
