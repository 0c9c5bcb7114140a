import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from histq import (
    HilbertSpace,
    InvalidOperator,
    NotNormalized,
    Projector,
    SpaceMismatch,
    UnitaryOp,
    basis_permutation_unitary,
    commutes,
    complement,
    complete_unitary,
    projector_from_state,
    projector_sum,
    tensor,
)
from histq.errors import (
    MixedKinds,
    NonOrthonormalInputs,
    NonOrthonormalOutputs,
    TooManyVectors,
)

from random_families import haar_unitary, random_state


def test_space_basics():
    sp = HilbertSpace(("a", "b", "c"))
    assert sp.dim == 3
    assert sp.index("b") == 1
    with pytest.raises(KeyError):
        sp.index("z")
    with pytest.raises(InvalidOperator):
        HilbertSpace(("a", "a"))


def test_basis_state_and_sparse_state():
    sp = HilbertSpace(("a", "b"))
    v = sp.state({"a": 3.0, "b": 4.0}, normalize=True)
    assert v.is_normalized()
    assert abs(v.amplitudes[0] - 0.6) < 1e-12
    assert sp.basis_state("b").amplitudes[1] == 1.0


def test_projector_invariants_enforced():
    sp = HilbertSpace(("a", "b"))
    with pytest.raises(InvalidOperator):
        Projector(sp, [[0.5, 0.0], [0.0, 0.0]])  # not idempotent
    with pytest.raises(InvalidOperator):
        Projector(sp, [[0.0, 1.0], [0.0, 0.0]])  # not hermitian
    p = sp.projector_onto_labels(["a"])
    assert p.rank == 1
    assert complement(p).rank == 1
    assert complement(complement(p)).approx_equal(p)


def test_projector_from_state_requires_normalization():
    sp = HilbertSpace(("a", "b"))
    with pytest.raises(NotNormalized):
        projector_from_state(sp.state({"a": 2.0}))


def test_projector_order_and_orthogonality():
    sp = HilbertSpace(("a", "b", "c"))
    pab = sp.projector_onto_labels(["a", "b"])
    pa = sp.projector_onto_labels(["a"])
    pc = sp.projector_onto_labels(["c"])
    assert pab.contains(pa)
    assert not pa.contains(pab)
    assert pa.orthogonal_to(pc)
    assert commutes(pa, pab)


def test_unitary_invariant_and_composition():
    sp = HilbertSpace(("a", "b"))
    with pytest.raises(InvalidOperator):
        UnitaryOp(sp, [[1, 1], [0, 1]])
    h = UnitaryOp(sp, np.array([[1, 1], [1, -1]]) / np.sqrt(2))
    assert np.allclose(h.then(h).matrix, np.eye(2))
    assert np.allclose(h.dagger().matrix, h.matrix.conj().T)


def test_tensor_labels_and_kron_order():
    a = HilbertSpace(("x", "y"))
    b = HilbertSpace(("0", "1"))
    joint = tensor([a, b])
    # left factor is the slow index
    assert joint.basis_labels == ("x0", "x1", "y0", "y1")
    v = tensor([a.basis_state("y"), b.basis_state("0")])
    assert v.amplitudes[joint.index("y0")] == 1.0
    with pytest.raises(MixedKinds):
        tensor([a, a.basis_state("x")])


def test_projector_sum_rejects_non_projector_result():
    sp = HilbertSpace(("a", "b"))
    pa = sp.projector_onto_labels(["a"])
    with pytest.raises(InvalidOperator):
        projector_sum([pa, pa])  # overlapping parts: 2*pa is no projector


def test_complete_unitary_agrees_with_partial_map():
    sp = HilbertSpace(("a", "b", "c"))
    target = sp.state({"b": 1 / np.sqrt(2), "c": 1 / np.sqrt(2)})
    u = complete_unitary(sp, [(sp.basis_state("a"), target)])
    out = u.apply(sp.basis_state("a"))
    assert np.allclose(out.amplitudes, target.amplitudes)


def test_complete_unitary_is_deterministic():
    sp = HilbertSpace(("a", "b", "c"))
    target = sp.state({"b": 1 / np.sqrt(2), "c": 1 / np.sqrt(2)})
    u1 = complete_unitary(sp, [(sp.basis_state("a"), target)])
    u2 = complete_unitary(sp, [(sp.basis_state("a"), target)])
    assert np.array_equal(u1.matrix, u2.matrix)


def test_complete_unitary_validation():
    sp = HilbertSpace(("a", "b"))
    v = sp.state({"a": 1 / np.sqrt(2), "b": 1 / np.sqrt(2)})
    with pytest.raises(NonOrthonormalInputs):
        complete_unitary(sp, [(sp.basis_state("a"), v), (v, sp.basis_state("a"))])
    with pytest.raises(NonOrthonormalOutputs):
        complete_unitary(sp, [(sp.basis_state("a"), v), (sp.basis_state("b"), v)])
    with pytest.raises(TooManyVectors):
        pairs = [(sp.basis_state("a"), sp.basis_state("a"))] * 3
        complete_unitary(sp, pairs)
    assert np.allclose(complete_unitary(sp, []).matrix, np.eye(2))


def test_basis_permutation_unitary():
    sp = HilbertSpace(("a", "b", "c"))
    u = basis_permutation_unitary(sp, {"a": "b", "b": "a"})
    assert np.allclose(u.apply(sp.basis_state("a")).amplitudes,
                       sp.basis_state("b").amplitudes)
    assert np.allclose(u.apply(sp.basis_state("c")).amplitudes,
                       sp.basis_state("c").amplitudes)
    with pytest.raises(InvalidOperator):
        basis_permutation_unitary(sp, {"a": "b"})  # b maps to b too: collision


def test_space_mismatch_guards():
    a = HilbertSpace(("x", "y"))
    b = HilbertSpace(("u", "v"))
    with pytest.raises(SpaceMismatch):
        a.basis_state("x").inner(b.basis_state("u"))
    with pytest.raises(SpaceMismatch):
        commutes(a.projector_onto_labels(["x"]), b.projector_onto_labels(["u"]))


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=2, max_value=8), st.integers(min_value=0, max_value=10**6))
def test_random_unitary_conjugation_preserves_projectors(dim, seed):
    rng = np.random.default_rng(seed)
    u = haar_unitary(dim, rng)
    sp = HilbertSpace(tuple(f"b{i}" for i in range(dim)))
    k = int(rng.integers(1, dim))
    diag = np.zeros((dim, dim), dtype=complex)
    diag[:k, :k] = np.eye(k)
    p = Projector(sp, u @ diag @ u.conj().T)
    assert p.rank == k
    assert complement(p).rank == dim - k


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=2, max_value=8), st.integers(min_value=0, max_value=10**6))
def test_complete_unitary_random_single_pair(dim, seed):
    rng = np.random.default_rng(seed)
    sp = HilbertSpace(tuple(f"b{i}" for i in range(dim)))
    vin = sp.state(dict(zip(sp.basis_labels, random_state(dim, rng))))
    vout = sp.state(dict(zip(sp.basis_labels, random_state(dim, rng))))
    u = complete_unitary(sp, [(vin, vout)])
    assert np.allclose(u.apply(vin).amplitudes, vout.amplitudes, atol=1e-10)
