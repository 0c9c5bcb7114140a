"""Consistent families (frameworks) of histories.

A family is an exhaustive, mutually orthogonal set of elementary histories
sharing a fixed initial event, certified against the consistency condition:
vanishing off-diagonal decoherence (real part under the "medium" setting,
full value under "strong").

For event evaluation each certified family carries an internal atomic
refinement: every elementary history is split along the Boolean atoms
generated by the event projectors used at each time slot.  An event
projector belongs to the family's algebra at a time iff every finite-weight
atom at that slot lies entirely inside or entirely outside it; this makes
coarse and fine versions of the same physical event (which differ only on
zero-weight branches) interchangeable, as probability bookkeeping requires.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    FamilyError,
    Inconsistent,
    NonOrthogonal,
    NotExhaustive,
)
from .events import Atom, EventExpr, atoms as expr_atoms, evaluate
from .histories import (
    Dynamics,
    History,
    chain_operator,
    decoherence,
    same_dynamics,
    weight,
)
from .linalg import EPS, Projector, complement, commutes, max_abs

#: Consistency tolerance, deliberately looser than the structural EPS so the
#: certificate can report residuals rather than only thresholding them.
CONSISTENCY_EPS = 1e-9

#: Weight below which a history counts as dynamically impossible.
ZERO_WEIGHT = 1e-10

CONDITIONS = ("medium", "strong")


def _dedupe_projectors(projs: Sequence[Projector]) -> List[Projector]:
    out: List[Projector] = []
    for p in projs:
        if not any(p.approx_equal(q) for q in out):
            out.append(p)
    return out


def boolean_atoms(projs: Sequence[Projector]) -> List[Projector]:
    """Nonzero atoms of the Boolean algebra generated by commuting projectors.

    Computed by exact subset products of each generator or its complement
    (2^k terms, k small throughout).
    """
    projs = _dedupe_projectors(projs)
    if len(projs) > 14:
        raise FamilyError(f"too many distinct slot projectors ({len(projs)})")
    space = projs[0].space
    out: List[Projector] = []
    for signs in itertools.product((True, False), repeat=len(projs)):
        m = np.eye(space.dim, dtype=complex)
        for p, keep in zip(projs, signs):
            m = m @ (p.matrix if keep else np.eye(space.dim) - p.matrix)
        if max_abs(m) > EPS:
            labels = [
                (p.label or "?") if keep else f"~{p.label or '?'}"
                for p, keep in zip(projs, signs)
            ]
            out.append(Projector(space, m, label=".".join(labels) if len(projs) > 1 else labels[0]))
    return out


@dataclass(frozen=True)
class AtomicHistory:
    """One cell of the family's internal atomic refinement."""

    history: History
    weight: float
    parent: int  # index of the elementary history it refines


@dataclass(frozen=True)
class Certificate:
    """Machine-readable consistency report for a certified family."""

    condition: str
    weights: Tuple[float, ...]
    max_re_residual: float
    max_abs_residual: float
    completeness_residual: float
    refinement_residual: float
    re_residuals: Tuple[Tuple[float, ...], ...]
    abs_residuals: Tuple[Tuple[float, ...], ...]
    zero_weight_flags: Tuple[bool, ...]

    @property
    def verdict(self) -> str:
        return "consistent"

    def to_dict(self, history_labels: Optional[Sequence[str]] = None) -> dict:
        d = {
            "verdict": self.verdict,
            "condition": self.condition,
            "weights": list(self.weights),
            "max_re_residual": self.max_re_residual,
            "max_abs_residual": self.max_abs_residual,
            "completeness_residual": self.completeness_residual,
            "re_residuals": [list(r) for r in self.re_residuals],
            "abs_residuals": [list(r) for r in self.abs_residuals],
            "zero_weight": list(self.zero_weight_flags),
        }
        if history_labels is not None:
            d["histories"] = list(history_labels)
        return d


@dataclass(frozen=True, eq=False)
class Family:
    """A certified framework: sample space plus consistency certificate."""

    dynamics: Dynamics
    initial: Projector
    elementary: Tuple[History, ...]
    certificate: Certificate
    name: Optional[str] = None
    _atomic: Tuple[AtomicHistory, ...] = field(repr=False, default=())
    _slot_atoms: Tuple[Tuple[Projector, ...], ...] = field(repr=False, default=())

    # -- basic accessors ---------------------------------------------------

    @property
    def times(self) -> Tuple[str, ...]:
        return self.dynamics.times

    @property
    def total_weight(self) -> float:
        return float(sum(self.certificate.weights))

    def finite_histories(self) -> List[Tuple[History, float]]:
        return [
            (h, w)
            for h, w in zip(self.elementary, self.certificate.weights)
            if w > ZERO_WEIGHT
        ]

    def finite_atoms_at(self, k: int) -> List[Projector]:
        """Distinct refinement atoms carried by finite-weight cells at time
        index k >= 1."""
        seen: List[Projector] = []
        for cell in self._atomic:
            if cell.weight <= ZERO_WEIGHT:
                continue
            a = cell.history.events[k - 1]
            if not any(a is q or a.approx_equal(q) for q in seen):
                seen.append(a)
        return seen

    # -- event algebra -----------------------------------------------------

    def _atom_inside(self, cell_proj: Projector, p: Projector) -> Optional[bool]:
        """True if the cell's projector lies inside p, False if outside,
        None if it straddles (p not in the algebra here)."""
        if p.contains(cell_proj, eps=1e-8):
            return True
        if max_abs(p.matrix @ cell_proj.matrix) <= 1e-8:
            return False
        return None

    def _membership(self, atom: Atom) -> bool:
        try:
            k = self.dynamics.time_index(atom.time)
        except KeyError:
            return False
        if atom.projector.space != self.dynamics.space:
            return False
        if k == 0:
            return self._atom_inside(self.initial, atom.projector) is not None
        for a in self.finite_atoms_at(k):
            if self._atom_inside(a, atom.projector) is None:
                return False
        return True

    def contains_event(self, e: EventExpr) -> bool:
        """True iff every atom of e is evaluable in this family's algebra."""
        return all(self._membership(a) for a in expr_atoms(e))

    def _satisfies(self, cell: AtomicHistory, atom: Atom) -> bool:
        k = self.dynamics.time_index(atom.time)
        proj = self.initial if k == 0 else cell.history.events[k - 1]
        return bool(self._atom_inside(proj, atom.projector))

    def event_weight(self, e: EventExpr) -> float:
        """Unnormalized weight of the compound event (algebra membership is
        the caller's responsibility)."""
        return float(
            sum(
                cell.weight
                for cell in self._atomic
                if cell.weight > ZERO_WEIGHT
                and evaluate(e, lambda a: self._satisfies(cell, a))
            )
        )

    def to_report(self) -> dict:
        labels = [" . ".join(h.labels()) for h in self.elementary]
        d = self.certificate.to_dict(labels)
        d["family"] = self.name
        d["times"] = list(self.times)
        return d


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _used_slot_projectors(candidate: Sequence[History]) -> List[List[Projector]]:
    n = candidate[0].dynamics.n_steps
    return [
        _dedupe_projectors([h.events[k] for h in candidate]) for k in range(n)
    ]


def _atomic_refinement(
    candidate: Sequence[History],
    slot_atoms: List[List[Projector]],
) -> List[AtomicHistory]:
    cells: List[AtomicHistory] = []
    for idx, h in enumerate(candidate):
        per_slot: List[List[Projector]] = []
        for k, event in enumerate(h.events):
            inside = [a for a in slot_atoms[k] if event.contains(a, eps=1e-8)]
            per_slot.append(inside)
        for combo in itertools.product(*per_slot):
            ah = History(h.dynamics, h.initial, tuple(combo))
            cells.append(AtomicHistory(ah, weight(ah), idx))
    return cells


def validate_family(
    candidate: Sequence[History],
    condition: str = "medium",
    eps_c: float = CONSISTENCY_EPS,
    name: Optional[str] = None,
) -> Family:
    """Certify a candidate sample space of histories.

    Raises NotExhaustive, NonOrthogonal, or Inconsistent with the offending
    pair/time recorded in the exception detail.
    """
    if condition not in CONDITIONS:
        raise ValueError(f"condition must be one of {CONDITIONS}")
    candidate = list(candidate)
    if not candidate:
        raise FamilyError("empty candidate family")
    dyn = candidate[0].dynamics
    initial = candidate[0].initial
    for h in candidate[1:]:
        if not same_dynamics(h.dynamics, dyn):
            raise FamilyError("candidate histories on different dynamics")
        if not h.initial.approx_equal(initial):
            raise FamilyError("candidate histories with different initial events")

    # slot projectors must commute pairwise (Boolean algebra per slot)
    slots = _used_slot_projectors(candidate)
    for k, projs in enumerate(slots):
        for p, q in itertools.combinations(projs, 2):
            if not commutes(p, q, eps=1e-8):
                raise NonOrthogonal(
                    f"non-commuting projectors at time {dyn.times[k + 1]}",
                    detail={"time": dyn.times[k + 1], "p": p.label, "q": q.label},
                )

    # mutual exclusivity: distinct histories orthogonal at some time
    for i, j in itertools.combinations(range(len(candidate)), 2):
        hi, hj = candidate[i], candidate[j]
        if not any(
            hi.events[k].orthogonal_to(hj.events[k], eps=1e-8)
            for k in range(dyn.n_steps)
        ):
            raise NonOrthogonal(
                f"histories {i} and {j} overlap at every time",
                detail={"pair": (i, j)},
            )

    # exhaustiveness: chains sum to the full support of the initial event
    total = sum(chain_operator(h) for h in candidate)
    target = dyn.total_unitary() @ initial.matrix
    completeness_residual = max_abs(total - target)
    if completeness_residual > eps_c:
        raise NotExhaustive(
            f"chain sum misses the initial support by {completeness_residual:.3e}",
            detail={"residual": completeness_residual},
        )

    # consistency: off-diagonal decoherence among finite-weight members
    weights = [weight(h) for h in candidate]
    finite = [i for i, w in enumerate(weights) if w > ZERO_WEIGHT]
    m = len(candidate)
    re_res = [[0.0] * m for _ in range(m)]
    abs_res = [[0.0] * m for _ in range(m)]
    worst: Tuple[float, Optional[Tuple[int, int]]] = (0.0, None)
    for a, b in itertools.combinations(finite, 2):
        d = decoherence(candidate[a], candidate[b])
        re_res[a][b] = re_res[b][a] = abs(d.real)
        abs_res[a][b] = abs_res[b][a] = abs(d)
        resid = abs(d.real) if condition == "medium" else abs(d)
        if resid > worst[0]:
            worst = (resid, (a, b))
    max_re = max((re_res[a][b] for a in range(m) for b in range(m) if a != b), default=0.0)
    max_ab = max((abs_res[a][b] for a in range(m) for b in range(m) if a != b), default=0.0)
    threshold = max_re if condition == "medium" else max_ab
    if threshold > eps_c:
        raise Inconsistent(
            f"off-diagonal decoherence residual {worst[0]:.3e} at pair {worst[1]}",
            detail={"pair": worst[1], "residual": worst[0], "condition": condition},
        )

    slot_atoms = [boolean_atoms(projs) for projs in slots]
    cells = _atomic_refinement(candidate, slot_atoms)
    refinement_residual = abs(sum(c.weight for c in cells) - sum(weights))

    cert = Certificate(
        condition=condition,
        weights=tuple(weights),
        max_re_residual=max_re,
        max_abs_residual=max_ab,
        completeness_residual=completeness_residual,
        refinement_residual=refinement_residual,
        re_residuals=tuple(tuple(r) for r in re_res),
        abs_residuals=tuple(tuple(r) for r in abs_res),
        zero_weight_flags=tuple(w <= ZERO_WEIGHT for w in weights),
    )
    return Family(
        dynamics=dyn,
        initial=initial,
        elementary=tuple(candidate),
        certificate=cert,
        name=name,
        _atomic=tuple(cells),
        _slot_atoms=tuple(tuple(s) for s in slot_atoms),
    )


def complete_candidate(
    dynamics: Dynamics,
    initial: Projector,
    slot_projectors: Sequence[Sequence[Projector]],
) -> List[History]:
    """Exhaustive candidate from per-slot event lists.

    Each slot's projectors are closed into the Boolean atoms they generate
    (adding the complement of their union), and the sample space is the
    Cartesian product of atoms across slots.  This is the auto-completion
    that supplies the zero-weight histories usually left implicit.
    """
    if len(slot_projectors) != dynamics.n_steps:
        raise FamilyError("one projector list required per later time")
    atom_lists = [boolean_atoms(list(projs)) for projs in slot_projectors]
    return [
        History(dynamics, initial, combo)
        for combo in itertools.product(*atom_lists)
    ]


def family_from_slots(
    dynamics: Dynamics,
    initial: Projector,
    slot_projectors: Sequence[Sequence[Projector]],
    condition: str = "medium",
    name: Optional[str] = None,
) -> Family:
    """Auto-complete per-slot events into a candidate and certify it."""
    return validate_family(
        complete_candidate(dynamics, initial, slot_projectors),
        condition=condition,
        name=name,
    )


# ---------------------------------------------------------------------------
# Refinement / compatibility
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Incompatible:
    """Typed refusal: the two families lack a common refinement."""

    reason: str  # "non-commuting" | "consistency-failure" | validation reason
    detail: dict

    def __bool__(self):
        return False

    def describe(self) -> str:
        return f"incompatible ({self.reason}): {self.detail}"


def refine(f: Family, g: Family, condition: Optional[str] = None):
    """Common refinement of two families, or an Incompatible verdict.

    The refined elementary histories use, at each time, the products of the
    two families' event projectors.  Comparing families across different
    dynamics or initial events is a usage error, not incompatibility.
    """
    if not same_dynamics(f.dynamics, g.dynamics):
        raise FamilyError("refine across different dynamics")
    if not f.initial.approx_equal(g.initial):
        raise FamilyError("refine across different initial events")
    condition = condition or f.certificate.condition
    if f is g:
        return f

    fslots = _used_slot_projectors(f.elementary)
    gslots = _used_slot_projectors(g.elementary)
    for k, (fp, gp) in enumerate(zip(fslots, gslots)):
        for p in fp:
            for q in gp:
                if not commutes(p, q, eps=1e-8):
                    return Incompatible(
                        reason="non-commuting",
                        detail={
                            "time": f.dynamics.times[k + 1],
                            "p": p.label,
                            "q": q.label,
                        },
                    )

    candidate: List[History] = []
    for hf in f.elementary:
        for hg in g.elementary:
            events = []
            dead = False
            for pf, pg in zip(hf.events, hg.events):
                m = pf.matrix @ pg.matrix
                label = None
                if pf.label and pg.label:
                    label = pf.label if pf.label == pg.label else f"{pf.label}.{pg.label}"
                proj = Projector(f.dynamics.space, m, label=label)
                if proj.is_zero():
                    dead = True
                    break
                events.append(proj)
            if dead:
                continue
            h = History(f.dynamics, f.initial, tuple(events))
            if not any(
                all(a.approx_equal(b) for a, b in zip(h.events, other.events))
                for other in candidate
            ):
                candidate.append(h)

    try:
        return validate_family(
            candidate,
            condition=condition,
            name=f"refine({f.name or '?'},{g.name or '?'})",
        )
    except Inconsistent as exc:
        return Incompatible(reason="consistency-failure", detail=exc.detail)
    except FamilyError as exc:
        return Incompatible(reason=type(exc).__name__, detail=getattr(exc, "detail", {}))


def contains_event(f: Family, e: EventExpr) -> bool:
    return f.contains_event(e)
