import pytest

import qep.qasp
from qep import (
    Atom,
    CapExceededError,
    LEAF,
    ONE,
    SemanticsKind,
    SemanticsReport,
    ZERO,
    accepted_policies,
    compare_semantics,
    equilibrium_models,
    exists_node,
    forall2,
    interpretations,
    parse_theory,
    sat_qasp,
    to_json_dict,
    variables,
)
from corpus import MATRIX_POOL_2V, random_instances_3v, two_var_binders
from qep.formula import QuantifiedTheory

X, Y, Z = Atom("x"), Atom("y"), Atom("z")

# The satisfiability divergence witness: forall x exists y exists z with
# matrix {z -> x, ~z -> y, ~y -> z}.
WITNESS = parse_theory("forall x. exists y. exists z. z -> x. ~z -> y. ~y -> z.")
SWITCHING_POLICY = forall2(X, exists_node(Y, ONE, exists_node(Z, ZERO)), exists_node(Y, ZERO, exists_node(Z, ONE)))
SELF_SUPPORT_POLICY = forall2(X, exists_node(Y, ONE, exists_node(Z, ZERO)), exists_node(Y, ONE, exists_node(Z, ZERO)))
SELF_SUPPORT_VARIANT = forall2(X, exists_node(Y, ONE, exists_node(Z, ZERO)), exists_node(Y, ONE, exists_node(Z, ONE)))

BOTH = (SemanticsKind.FANDINNO, SemanticsKind.STEPHAN)


def small_corpus():
    out = [QuantifiedTheory(b, m) for b in two_var_binders() for m in MATRIX_POOL_2V[::3]]
    out.extend(random_instances_3v(count=40, seed=424242))
    return out


def test_existential_fact():
    theory = parse_theory("exists x. x.")
    for kind in BOTH:
        assert sat_qasp(theory, kind)
        assert accepted_policies(theory, kind) == {exists_node(X, ONE)}


def test_universal_fact_is_unsatisfiable():
    theory = parse_theory("forall x. x.")
    for kind in BOTH:
        assert not sat_qasp(theory, kind)
        assert accepted_policies(theory, kind) == frozenset()


def test_universal_excluded_middle():
    theory = parse_theory("forall x. x | ~x.")
    for kind in BOTH:
        assert sat_qasp(theory, kind)
        assert accepted_policies(theory, kind) == {forall2(X, LEAF, LEAF)}


def test_divergence_witness_policy_sets():
    report = compare_semantics(WITNESS)
    assert report.fandinno_sat and report.stephan_sat
    assert report.fandinno_policies == {SWITCHING_POLICY}
    assert report.stephan_policies == {SWITCHING_POLICY, SELF_SUPPORT_POLICY, SELF_SUPPORT_VARIANT}
    assert report.only_fandinno == frozenset()
    assert report.only_stephan == {SELF_SUPPORT_POLICY, SELF_SUPPORT_VARIANT}
    assert not report.identical()


def test_satisfiable_iff_some_policy_accepted():
    for theory in small_corpus():
        for kind in BOTH:
            assert sat_qasp(theory, kind) == bool(accepted_policies(theory, kind))


def test_double_negation_reading_implies_strong_reading():
    for theory in small_corpus():
        if sat_qasp(theory, SemanticsKind.FANDINNO):
            assert sat_qasp(theory, SemanticsKind.STEPHAN)
        assert accepted_policies(theory, SemanticsKind.FANDINNO) <= accepted_policies(
            theory, SemanticsKind.STEPHAN
        )


def test_leaf_level_lifting():
    # Fix every binder variable along each crisp path: the augmented
    # equilibrium models under the double negation reading form a subset
    # of those under the strong reading.
    for theory in small_corpus()[:60]:
        atoms = [a for _, a in theory.binder.entries]
        domain = variables(theory.matrix) | theory.binder.atoms()
        for m in interpretations(atoms, (ZERO, ONE)):
            weak = theory.matrix + tuple(
                qep.qasp._augmentation(SemanticsKind.FANDINNO, a, m.value(a)) for a in atoms
            )
            strong = theory.matrix + tuple(
                qep.qasp._augmentation(SemanticsKind.STEPHAN, a, m.value(a)) for a in atoms
            )
            assert set(equilibrium_models(weak, domain)) <= set(
                equilibrium_models(strong, domain)
            )


def test_binder_cap_and_free_atoms_rejected():
    entries = ".".join(f"exists v{i}" for i in range(9))
    theory = parse_theory(entries + ". v0.")
    with pytest.raises(CapExceededError):
        sat_qasp(theory, SemanticsKind.FANDINNO)
    assert sat_qasp(theory, SemanticsKind.FANDINNO, cap=9)
    free = parse_theory("exists x. x & z.", allow_free=True)
    with pytest.raises(ValueError):
        sat_qasp(free, SemanticsKind.STEPHAN)
    with pytest.raises(ValueError):
        accepted_policies(free, SemanticsKind.STEPHAN)


def test_report_json_shape():
    report = compare_semantics(WITNESS)
    data = report.to_json_dict()
    assert set(data) == {"fandinno", "stephan", "only_stephan", "only_fandinno"}
    assert data["fandinno"]["sat"] is True
    assert data["fandinno"]["policies"] == [to_json_dict(SWITCHING_POLICY)]
    assert len(data["stephan"]["policies"]) == 3
    assert data["only_fandinno"] == []
    assert [p["var"] for p in data["only_stephan"]] == ["x", "x"]


def test_identical_report_on_agreeing_theory():
    report = compare_semantics(parse_theory("exists x. x."))
    assert report.identical()
    assert report.only_stephan == frozenset() and report.only_fandinno == frozenset()


def test_semantics_kind_wire_values():
    assert SemanticsKind("fandinno") is SemanticsKind.FANDINNO
    assert SemanticsKind("stephan") is SemanticsKind.STEPHAN


def test_internal_invariant_guard(monkeypatch):
    # compare_semantics refuses to return a report claiming satisfiability
    # under the double negation reading but not under the strong one.
    def fake_sat(theory, kind, cap=8):
        return kind is SemanticsKind.FANDINNO

    monkeypatch.setattr(qep.qasp, "sat_qasp", fake_sat)
    with pytest.raises(RuntimeError):
        qep.qasp.compare_semantics(parse_theory("exists x. x."))


def test_report_is_frozen():
    report = SemanticsReport(True, True, frozenset(), frozenset())
    assert report.identical()
    with pytest.raises(AttributeError):
        report.fandinno_sat = False
