"""Finite-dimensional complex linear algebra for the histories engine.

Spaces carry named basis vectors; states, projectors and unitaries are dense
complex matrices validated against their structural invariants at
construction time.  Everything is immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    InvalidOperator,
    MixedKinds,
    NonOrthonormalInputs,
    NonOrthonormalOutputs,
    NotNormalized,
    SpaceMismatch,
    TooManyVectors,
)

#: Tolerance for all structural invariant checks (hermiticity, idempotence,
#: unitarity, normalization).  Spaces here are tiny, double precision is ample.
EPS = 1e-10


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    a.setflags(write=False)
    return a


def max_abs(m: np.ndarray) -> float:
    """Entrywise max-modulus norm used by every invariant check."""
    return 0.0 if m.size == 0 else float(np.max(np.abs(m)))


@dataclass(frozen=True)
class HilbertSpace:
    """A finite-dimensional space with ordered, named basis vectors."""

    basis_labels: Tuple[str, ...]
    factors: Optional[Tuple["HilbertSpace", ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))
        if len(set(self.basis_labels)) != len(self.basis_labels):
            raise InvalidOperator(f"duplicate basis labels: {self.basis_labels}")
        if not self.basis_labels:
            raise InvalidOperator("space must have positive dimension")
        if self.factors is not None:
            prod = 1
            for f in self.factors:
                prod *= f.dim
            if prod != self.dim:
                raise InvalidOperator("factor dimensions do not multiply to dim")

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    def index(self, label: str) -> int:
        try:
            return self.basis_labels.index(label)
        except ValueError:
            raise KeyError(f"no basis vector {label!r} in {self.basis_labels}")

    def basis_state(self, label: str) -> "StateVector":
        amp = np.zeros(self.dim, dtype=complex)
        amp[self.index(label)] = 1.0
        return StateVector(self, amp)

    def state(self, amplitudes: dict[str, complex], normalize: bool = False) -> "StateVector":
        """State from a sparse {label: amplitude} mapping."""
        amp = np.zeros(self.dim, dtype=complex)
        for label, a in amplitudes.items():
            amp[self.index(label)] = a
        if normalize:
            amp = amp / np.linalg.norm(amp)
        return StateVector(self, amp)

    def identity(self) -> "Projector":
        return Projector(self, np.eye(self.dim, dtype=complex), label="I")

    def zero(self) -> "Projector":
        return Projector(self, np.zeros((self.dim, self.dim), dtype=complex), label="0")

    def projector_onto_labels(self, labels: Iterable[str]) -> "Projector":
        """Diagonal projector onto the span of the named basis vectors."""
        m = np.zeros((self.dim, self.dim), dtype=complex)
        for label in labels:
            i = self.index(label)
            m[i, i] = 1.0
        return Projector(self, m)

    def __repr__(self):
        return f"HilbertSpace(dim={self.dim})"


@dataclass(frozen=True)
class StateVector:
    """A ket on a named space.  Physical states are unit vectors."""

    space: HilbertSpace
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amp.shape != (self.space.dim,):
            raise InvalidOperator(
                f"amplitude length {amp.shape[0]} != dim {self.space.dim}")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, eps: float = EPS) -> bool:
        return abs(self.norm - 1.0) <= eps

    def normalized(self) -> "StateVector":
        n = self.norm
        if n == 0.0:
            raise NotNormalized("cannot normalize the zero vector")
        return StateVector(self.space, self.amplitudes / n)

    def inner(self, other: "StateVector") -> complex:
        if other.space is not self.space and other.space != self.space:
            raise SpaceMismatch("inner product across different spaces")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __add__(self, other: "StateVector") -> "StateVector":
        return StateVector(self.space, self.amplitudes + other.amplitudes)

    def __sub__(self, other: "StateVector") -> "StateVector":
        return StateVector(self.space, self.amplitudes - other.amplitudes)

    def __mul__(self, scalar) -> "StateVector":
        return StateVector(self.space, self.amplitudes * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class Projector:
    """Hermitian idempotent with integral rank.  Labels are metadata only."""

    space: HilbertSpace
    matrix: np.ndarray
    label: Optional[str] = None

    def __post_init__(self):
        m = _as_matrix(self.matrix)
        d = self.space.dim
        if m.shape != (d, d):
            raise InvalidOperator(f"projector shape {m.shape} != ({d},{d})")
        if max_abs(m - m.conj().T) > EPS:
            raise InvalidOperator(f"projector {self.label or ''} not hermitian")
        if max_abs(m @ m - m) > EPS:
            raise InvalidOperator(f"projector {self.label or ''} not idempotent")
        tr = m.trace().real
        if abs(tr - round(tr)) > 1e-8:
            raise InvalidOperator(f"projector trace {tr} not integral")
        object.__setattr__(self, "matrix", m)

    @property
    def rank(self) -> int:
        return int(round(self.matrix.trace().real))

    def is_zero(self, eps: float = EPS) -> bool:
        return max_abs(self.matrix) <= eps

    def approx_equal(self, other: "Projector", eps: float = EPS) -> bool:
        return self.space == other.space and max_abs(self.matrix - other.matrix) <= eps

    def contains(self, other: "Projector", eps: float = EPS) -> bool:
        """Subspace order: other <= self."""
        return max_abs(self.matrix @ other.matrix - other.matrix) <= eps

    def orthogonal_to(self, other: "Projector", eps: float = EPS) -> bool:
        return max_abs(self.matrix @ other.matrix) <= eps

    def relabel(self, label: str) -> "Projector":
        return Projector(self.space, self.matrix, label=label)

    def __repr__(self):
        name = self.label or "?"
        return f"Projector({name}, rank={self.rank})"


@dataclass(frozen=True, eq=False)
class UnitaryOp:
    """A unitary matrix on a named space."""

    space: HilbertSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = _as_matrix(self.matrix)
        d = self.space.dim
        if m.shape != (d, d):
            raise InvalidOperator(f"unitary shape {m.shape} != ({d},{d})")
        if max_abs(m @ m.conj().T - np.eye(d)) > EPS:
            raise InvalidOperator("matrix is not unitary")
        object.__setattr__(self, "matrix", m)

    def apply(self, v: StateVector) -> StateVector:
        if v.space != self.space:
            raise SpaceMismatch("unitary applied to state on different space")
        return StateVector(self.space, self.matrix @ v.amplitudes)

    def then(self, other: "UnitaryOp") -> "UnitaryOp":
        """Composition: first self, then other."""
        if other.space != self.space:
            raise SpaceMismatch("composition across different spaces")
        return UnitaryOp(self.space, other.matrix @ self.matrix)

    def dagger(self) -> "UnitaryOp":
        return UnitaryOp(self.space, self.matrix.conj().T)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def projector_from_state(v: StateVector, label: Optional[str] = None) -> Projector:
    """Rank-1 projector |v><v| onto a normalized ket."""
    if not v.is_normalized():
        raise NotNormalized(f"|norm - 1| = {abs(v.norm - 1.0):.3e} exceeds {EPS}")
    m = np.outer(v.amplitudes, v.amplitudes.conj())
    return Projector(v.space, m, label=label)


def complement(p: Projector) -> Projector:
    """Negation I - P (orthogonal complement of the subspace)."""
    label = None if p.label is None else f"~{p.label}"
    return Projector(p.space, np.eye(p.space.dim) - p.matrix, label=label)


def commutes(p: Projector, q: Projector, eps: float = EPS) -> bool:
    if p.space != q.space:
        raise SpaceMismatch("commutation test across different spaces")
    return max_abs(p.matrix @ q.matrix - q.matrix @ p.matrix) <= eps


def projector_sum(parts: Sequence[Projector], label: Optional[str] = None) -> Projector:
    """Sum of mutually orthogonal projectors (validated by construction)."""
    if not parts:
        raise InvalidOperator("empty projector sum")
    m = sum(p.matrix for p in parts)
    return Projector(parts[0].space, m, label=label)


def tensor(factors: Sequence):
    """Kronecker product of spaces, states, or operators (uniform kind).

    Left factor is the slowest index; product basis labels are the
    concatenation of factor labels in declared order.
    """
    factors = list(factors)
    if not factors:
        raise MixedKinds("tensor of an empty list")
    kinds = {type(f) for f in factors}
    if len(kinds) > 1:
        raise MixedKinds(f"tensor of mixed kinds: {sorted(k.__name__ for k in kinds)}")
    kind = factors[0].__class__

    if kind is HilbertSpace:
        labels = factors[0].basis_labels
        for f in factors[1:]:
            labels = tuple(a + b for a in labels for b in f.basis_labels)
        return HilbertSpace(labels, factors=tuple(factors))

    space = tensor([f.space for f in factors])
    if kind is StateVector:
        amp = reduce(np.kron, [f.amplitudes for f in factors])
        return StateVector(space, amp)
    if kind is Projector:
        m = reduce(np.kron, [f.matrix for f in factors])
        label = None
        if all(f.label for f in factors):
            label = "".join(f.label for f in factors)
        return Projector(space, m, label=label)
    if kind is UnitaryOp:
        m = reduce(np.kron, [f.matrix for f in factors])
        return UnitaryOp(space, m)
    raise MixedKinds(f"cannot tensor objects of kind {kind.__name__}")


def _check_orthonormal(columns: np.ndarray, exc) -> None:
    gram = columns.conj().T @ columns
    if max_abs(gram - np.eye(columns.shape[1])) > EPS:
        raise exc


def _extend_to_basis(columns: np.ndarray, dim: int) -> np.ndarray:
    """Extend orthonormal columns to a full basis by modified Gram-Schmidt
    over the standard basis in label order.  Deterministic."""
    cols = [columns[:, i] for i in range(columns.shape[1])]
    for i in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[i] = 1.0
        for c in cols:
            v = v - c * np.vdot(c, v)
        n = np.linalg.norm(v)
        if n > 1e-8:
            cols.append(v / n)
        if len(cols) == dim:
            break
    # second orthogonalization pass for numerical hygiene
    out = []
    for v in cols:
        for c in out:
            v = v - c * np.vdot(c, v)
        out.append(v / np.linalg.norm(v))
    return np.column_stack(out)


def complete_unitary(
    space: HilbertSpace,
    partial_map: Sequence[Tuple[StateVector, StateVector]],
) -> UnitaryOp:
    """Unitary agreeing with a partial map of orthonormal kets.

    The action on the orthogonal complement is fixed by extending both the
    input and the output set to full bases (modified Gram-Schmidt over the
    standard basis in label order) and mapping i-th to i-th.  The empty map
    completes to the identity.
    """
    pairs = list(partial_map)
    if len(pairs) > space.dim:
        raise TooManyVectors(f"{len(pairs)} pairs on a dim-{space.dim} space")
    if not pairs:
        return UnitaryOp(space, np.eye(space.dim, dtype=complex))
    for vin, vout in pairs:
        if vin.space != space or vout.space != space:
            raise SpaceMismatch("partial map vectors on a different space")
    vin = np.column_stack([v.amplitudes for v, _ in pairs])
    vout = np.column_stack([w.amplitudes for _, w in pairs])
    _check_orthonormal(vin, NonOrthonormalInputs("input vectors not orthonormal"))
    _check_orthonormal(vout, NonOrthonormalOutputs("output vectors not orthonormal"))
    bin_ = _extend_to_basis(vin, space.dim)
    bout = _extend_to_basis(vout, space.dim)
    return UnitaryOp(space, bout @ bin_.conj().T)


def basis_permutation_unitary(space: HilbertSpace, mapping: dict[str, str]) -> UnitaryOp:
    """Unitary permuting basis vectors; labels absent from the mapping are
    fixed points.  The mapping must be injective."""
    full = {label: mapping.get(label, label) for label in space.basis_labels}
    if len(set(full.values())) != space.dim:
        raise InvalidOperator("basis mapping is not a permutation")
    m = np.zeros((space.dim, space.dim), dtype=complex)
    for src, dst in full.items():
        m[space.index(dst), space.index(src)] = 1.0
    return UnitaryOp(space, m)
