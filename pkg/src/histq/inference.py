"""Probability and logic layer over certified families.

Queries against a family either produce a number or a typed refusal; a
numeric answer is never produced for an event outside the family's algebra,
and results from families lacking a common refinement are never combined
(the single-framework rule).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .events import Atom, EventExpr, conjoin
from .families import Family, Incompatible, refine
from .linalg import Projector, complement

#: Tolerance for probability comparisons (equality to 0 or 1).
PROB_EPS = 1e-9

# Reason codes for in-band refusals.
INCOMPATIBLE_EVENT = "incompatible-event"
SINGLE_FRAMEWORK_VIOLATION = "single-framework-violation"
UNKNOWN_EVENT = "unknown-event"


@dataclass(frozen=True)
class QueryResult:
    """Value(p) | Meaningless(reason) | UndefinedConditional."""

    kind: str  # "value" | "meaningless" | "undefined-conditional"
    value: Optional[float] = None
    reason: Optional[str] = None
    explanation: Optional[str] = None
    framework: Optional[str] = None

    @property
    def is_value(self) -> bool:
        return self.kind == "value"

    @property
    def is_meaningless(self) -> bool:
        return self.kind == "meaningless"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "value": self.value,
            "reason": self.reason,
            "explanation": self.explanation,
            "framework": self.framework,
        }


def _value(p: float, family: Family) -> QueryResult:
    p = min(1.0, max(0.0, p))
    return QueryResult(kind="value", value=p, framework=family.name)


def meaningless(reason: str, explanation: str, family: Optional[Family] = None) -> QueryResult:
    return QueryResult(
        kind="meaningless",
        reason=reason,
        explanation=explanation,
        framework=family.name if family else None,
    )


def undefined_conditional(family: Family, explanation: str) -> QueryResult:
    return QueryResult(
        kind="undefined-conditional",
        explanation=explanation,
        framework=family.name,
    )


def prob(f: Family, e: EventExpr) -> QueryResult:
    """Probability of e given the family's initial event."""
    if not f.contains_event(e):
        return meaningless(
            INCOMPATIBLE_EVENT,
            f"event {e!r} is not in the algebra of family {f.name or '?'}",
            f,
        )
    return _value(f.event_weight(e) / f.total_weight, f)


def cond_prob(f: Family, target: EventExpr, data: EventExpr) -> QueryResult:
    """Pr(target | data) within f; undefined when Pr(data) vanishes."""
    for e, role in ((target, "target"), (data, "data")):
        if not f.contains_event(e):
            return meaningless(
                INCOMPATIBLE_EVENT,
                f"{role} event {e!r} is not in the algebra of family {f.name or '?'}",
                f,
            )
    wd = f.event_weight(data)
    if wd / f.total_weight <= PROB_EPS:
        return undefined_conditional(
            f, f"conditioning event {data!r} has probability zero")
    wt = f.event_weight(conjoin(target, data))
    return _value(wt / wd, f)


@dataclass(frozen=True)
class TruthVerdict:
    """true | false | contingent(p) | meaningless | undefined-conditional."""

    kind: str
    probability: Optional[float] = None
    reason: Optional[str] = None
    explanation: Optional[str] = None
    framework: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "probability": self.probability,
            "reason": self.reason,
            "explanation": self.explanation,
            "framework": self.framework,
        }


def is_true(f: Family, target: EventExpr, data: Optional[EventExpr] = None) -> TruthVerdict:
    """Probability-one truth, relative to the family (there is no
    family-free notion of truth here)."""
    r = cond_prob(f, target, data) if data is not None else prob(f, target)
    if r.kind != "value":
        return TruthVerdict(
            kind=r.kind if r.kind != "undefined-conditional" else "undefined-conditional",
            reason=r.reason,
            explanation=r.explanation,
            framework=f.name,
        )
    if abs(r.value - 1.0) <= PROB_EPS:
        return TruthVerdict(kind="true", probability=r.value, framework=f.name)
    if r.value <= PROB_EPS:
        return TruthVerdict(kind="false", probability=r.value, framework=f.name)
    return TruthVerdict(kind="contingent", probability=r.value, framework=f.name)


# ---------------------------------------------------------------------------
# Pair classification
# ---------------------------------------------------------------------------

CONTRADICTORY = "contradictory"
CONTRARY = "contrary"
INCOMPARABLE = "incomparable"
COMPATIBLE = "compatible"


@dataclass(frozen=True)
class Classification:
    kind: str

    @property
    def mutually_exclusive(self) -> bool:
        """Alias covering both contrary and contradictory pairs."""
        return self.kind in (CONTRARY, CONTRADICTORY)


def classify_pair(f: Family, time: str, p: Projector, q: Projector) -> Classification:
    """Relationship of two events at one time, relative to a family.

    Outside the family's algebra no logical comparison exists: the pair is
    incomparable, never contrary or contradictory.
    """
    for proj in (p, q):
        if not f.contains_event(Atom(time, proj)):
            return Classification(INCOMPARABLE)
    if q.approx_equal(complement(p), eps=1e-8):
        return Classification(CONTRADICTORY)
    if p.orthogonal_to(q, eps=1e-8):
        return Classification(CONTRARY)
    return Classification(COMPATIBLE)


# ---------------------------------------------------------------------------
# Single-framework rule
# ---------------------------------------------------------------------------

def cross_framework_guard(
    parts: Sequence[Tuple[Family, EventExpr]],
    data: Optional[EventExpr] = None,
) -> QueryResult:
    """Conjoin results drawn from several families.

    Produces a number only when all families pairwise admit a common
    refinement; the conjunction is then evaluated inside that refinement.
    Otherwise the combination is meaningless, never merely zero.
    """
    parts = list(parts)
    if not parts:
        raise ValueError("empty combination")
    common = parts[0][0]
    for fam, _ in parts[1:]:
        result = refine(common, fam)
        if isinstance(result, Incompatible):
            return meaningless(
                SINGLE_FRAMEWORK_VIOLATION,
                f"families {common.name or '?'} and {fam.name or '?'} are "
                f"{result.describe()}; their results cannot be combined",
            )
        common = result
    target = conjoin(*(e for _, e in parts))
    if data is not None:
        return cond_prob(common, target, data)
    return prob(common, target)
