"""Multi-time histories over a unitary schedule.

A history is a fixed initial projector plus one event projector per later
time.  Its chain operator interleaves the events with the step unitaries;
the squared Frobenius norm of the chain is the history's weight, and the
trace inner product of two chains is the decoherence functional.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import DynamicsMismatch, InvalidOperator, SpaceMismatch
from .linalg import HilbertSpace, Projector, UnitaryOp


@dataclass(frozen=True, eq=False)
class Dynamics:
    """Ordered time grid with one step unitary per interval.

    Time labels are opaque ordered tokens; no physical units enter any
    formula.
    """

    space: HilbertSpace
    times: Tuple[str, ...]
    step_unitaries: Tuple[UnitaryOp, ...]

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(self.times))
        object.__setattr__(self, "step_unitaries", tuple(self.step_unitaries))
        if len(self.step_unitaries) != len(self.times) - 1:
            raise InvalidOperator(
                f"{len(self.times)} times need {len(self.times) - 1} step "
                f"unitaries, got {len(self.step_unitaries)}")
        if len(set(self.times)) != len(self.times):
            raise InvalidOperator("time labels must be distinct")
        for u in self.step_unitaries:
            if u.space != self.space:
                raise SpaceMismatch("step unitary on a different space")

    @property
    def n_steps(self) -> int:
        return len(self.step_unitaries)

    def time_index(self, time: str) -> int:
        try:
            return self.times.index(time)
        except ValueError:
            raise KeyError(f"unknown time {time!r}; times are {self.times}")

    def total_unitary(self) -> np.ndarray:
        """Propagator from the first to the last time."""
        m = np.eye(self.space.dim, dtype=complex)
        for u in self.step_unitaries:
            m = u.matrix @ m
        return m


@dataclass(frozen=True, eq=False)
class History:
    """Projector chain: `initial` at the first time, one event per later time."""

    dynamics: Dynamics
    initial: Projector
    events: Tuple[Projector, ...]

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        if len(self.events) != self.dynamics.n_steps:
            raise InvalidOperator(
                f"history needs {self.dynamics.n_steps} later events, "
                f"got {len(self.events)}")
        for p in (self.initial, *self.events):
            if p.space != self.dynamics.space:
                raise SpaceMismatch("history projector on a different space")

    def projector_at(self, k: int) -> Projector:
        """Event projector at time index k (0 = initial)."""
        return self.initial if k == 0 else self.events[k - 1]

    def with_event(self, k: int, p: Projector) -> "History":
        """Copy with the event at time index k >= 1 replaced."""
        ev = list(self.events)
        ev[k - 1] = p
        return History(self.dynamics, self.initial, tuple(ev))

    def labels(self) -> Tuple[str, ...]:
        return tuple(p.label or "?" for p in (self.initial, *self.events))

    def __repr__(self):
        return "History(" + " . ".join(self.labels()) + ")"


def same_dynamics(d1: Dynamics, d2: Dynamics, eps: float = 1e-10) -> bool:
    """Structural equality: same space, same time labels, same step matrices."""
    if d1 is d2:
        return True
    if d1.space != d2.space or d1.times != d2.times:
        return False
    return all(
        float(np.max(np.abs(u1.matrix - u2.matrix))) <= eps
        for u1, u2 in zip(d1.step_unitaries, d2.step_unitaries)
    )


def chain_operator(h: History) -> np.ndarray:
    """K(h) = P_n U_{n-1} ... P_1 U_0 P_0."""
    m = h.initial.matrix.copy()
    for u, p in zip(h.dynamics.step_unitaries, h.events):
        m = p.matrix @ (u.matrix @ m)
    return m


def weight(h: History) -> float:
    """W(h) = Tr[K(h)+ K(h)], the squared Frobenius norm of the chain."""
    k = chain_operator(h)
    return float(np.sum(np.abs(k) ** 2))


def decoherence(h1: History, h2: History) -> complex:
    """D(h1, h2) = Tr[K(h1)+ K(h2)].

    Hermitian in its arguments; the diagonal equals the weight.
    """
    if not same_dynamics(h1.dynamics, h2.dynamics):
        raise DynamicsMismatch("decoherence across different dynamics")
    k1 = chain_operator(h1)
    k2 = chain_operator(h2)
    return complex(np.trace(k1.conj().T @ k2))
