"""Inference over consistent families of quantum histories.

Finite-dimensional Hilbert spaces, projector events, multi-time histories
with unitary dynamics, decoherence-functional certification of families,
probability queries under the single-framework rule, built-in scenarios,
and a seeded sampler.
"""

from .errors import (
    DynamicsMismatch,
    FamilyError,
    HistQError,
    Inconsistent,
    InvalidOperator,
    NonOrthogonal,
    NotExhaustive,
    NotNormalized,
    ScenarioFileError,
    SpaceMismatch,
)
from .linalg import (
    EPS,
    HilbertSpace,
    Projector,
    StateVector,
    UnitaryOp,
    basis_permutation_unitary,
    commutes,
    complement,
    complete_unitary,
    projector_from_state,
    projector_sum,
    tensor,
)
from .histories import (
    Dynamics,
    History,
    chain_operator,
    decoherence,
    same_dynamics,
    weight,
)
from .events import And, Atom, EventExpr, Not, Or, conjoin, parse_expr, resolve
from .families import (
    CONSISTENCY_EPS,
    ZERO_WEIGHT,
    Certificate,
    Family,
    Incompatible,
    boolean_atoms,
    contains_event,
    family_from_slots,
    refine,
    validate_family,
)
from .inference import (
    Classification,
    QueryResult,
    TruthVerdict,
    classify_pair,
    cond_prob,
    cross_framework_guard,
    is_true,
    prob,
)
from .scenarios import BUILTIN_BUILDERS, Scenario, get_builtin
from .scenario_io import export_scenario, load_scenario
from .sampler import SampleReport, sample

__version__ = "0.1.0"

__all__ = [
    "HistQError", "SpaceMismatch", "DynamicsMismatch", "NotNormalized",
    "InvalidOperator", "FamilyError", "NotExhaustive", "NonOrthogonal",
    "Inconsistent", "ScenarioFileError",
    "EPS", "HilbertSpace", "StateVector", "Projector", "UnitaryOp",
    "projector_from_state", "complement", "commutes", "projector_sum",
    "tensor", "complete_unitary", "basis_permutation_unitary",
    "Dynamics", "History", "chain_operator", "weight", "decoherence",
    "same_dynamics",
    "Atom", "Not", "And", "Or", "EventExpr", "conjoin", "parse_expr", "resolve",
    "CONSISTENCY_EPS", "ZERO_WEIGHT", "Certificate", "Family", "Incompatible",
    "boolean_atoms", "validate_family", "family_from_slots", "refine",
    "contains_event",
    "QueryResult", "TruthVerdict", "Classification", "prob", "cond_prob",
    "is_true", "classify_pair", "cross_framework_guard",
    "Scenario", "BUILTIN_BUILDERS", "get_builtin",
    "load_scenario", "export_scenario",
    "SampleReport", "sample",
]
