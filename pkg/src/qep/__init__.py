"""Solver and policy extractor for prenex quantified propositional
theories over classical, three valued and equilibrium semantics."""

from .elimination import (
    ThetaPair,
    equilibrium_policies,
    folded,
    merge_exists,
    merge_forall,
    prune_noncrisp,
    qem,
    qem_base_exists,
    qem_base_forall,
    validate_theta_pair,
)
from .errors import (
    CapExceededError,
    NonConformingPolicyError,
    NonCrispError,
    ParseError,
    QepError,
    UndefinedAtomError,
)
from .formula import (
    BOT,
    TOP,
    And,
    Atom,
    Binder,
    Bot,
    Formula,
    Implies,
    Or,
    Quantifier,
    QuantifiedTheory,
    Var,
    neg,
    parse_formula,
    parse_theory,
    print_formula,
    print_theory,
    var,
    variables,
)
from .oracle import OracleResult, brute_equilibrium_policies, is_equilibrium_configuration
from .policy import (
    LEAF,
    Configuration,
    ExistsNode,
    ForallNode,
    Leaf,
    Policy,
    canonical_key,
    compact,
    conforms,
    enumerate_policies,
    is_binary,
    exists_node,
    forall2,
    forall3,
    member_of,
    members,
    policy_count,
    policy_from_json,
    render,
    sat_classical,
    sat_mixed,
    sat_qg3,
    sort_policies,
    to_dot,
    to_json_dict,
)
from .qasp import SemanticsKind, SemanticsReport, accepted_policies, compare_semantics, sat_qasp
from .semantics import (
    EPSILON,
    HALF,
    ONE,
    VALUES2,
    VALUES3,
    ZERO,
    Interp,
    Ordering,
    Value,
    cmp,
    equilibrium_models,
    eval2,
    eval3,
    eval_qg3,
    eval_theory,
    format_value,
    interpretations,
    is_equilibrium_model,
    is_model,
    leq,
    lt,
    parse_value,
)

__version__ = "0.1.0"
