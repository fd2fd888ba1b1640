import numpy as np
import pytest

import clifford
from errors import NotClifford
from gf2 import BitMatrix, BitVector, f_d
from pauli import PhasedPauli
from weyl import (
    WeylExpansion,
    as_phased_pauli,
    classify_points,
    conjugate,
    expand,
    is_unitary,
    num_qubits,
    pauli_candidate,
    projectively_equal,
    random_expansion,
    support_invariant_under,
    support_is_coset,
    synthesize,
    translate_support,
)


def _points(strings):
    return [BitVector.from_str(s) for s in strings]


def test_num_qubits():
    assert num_qubits(np.eye(8)) == 3
    with pytest.raises(ValueError):
        num_qubits(np.eye(3))
    with pytest.raises(ValueError):
        num_qubits(np.ones((2, 4)))
    with pytest.raises(ValueError):
        num_qubits(np.eye(1))


def test_cnot_expansion_golden(cnot):
    W = expand(cnot)
    observed = {str(p): v for p, v in W.items()}
    assert set(observed) == {"0000", "0010", "0100", "0110"}
    assert abs(observed["0000"] - 0.5) < 1e-12
    assert abs(observed["0010"] - 0.5) < 1e-12
    assert abs(observed["0100"] - 0.5) < 1e-12
    assert abs(observed["0110"] + 0.5) < 1e-12


def test_pauli_expands_to_single_point():
    p = PhasedPauli.from_string("XYZ")
    W = expand(p.to_dense())
    assert W.points() == [p.point]
    assert abs(W.coefficient(p.point) - 1) < 1e-12


def test_expansion_resynthesizes(rng):
    for m in (1, 2, 3):
        M = rng.normal(size=(1 << m, 1 << m)) + 1j * rng.normal(size=(1 << m, 1 << m))
        W = expand(M)
        assert np.allclose(synthesize(W), M)
        assert abs(W.norm_squared() - np.trace(M.conj().T @ M).real / (1 << m)) < 1e-9


def test_random_expansion_roundtrip(rng):
    W = random_expansion(2, 5, rng)
    again = expand(synthesize(W))
    assert again.support() == W.support()
    assert all(abs(again.coefficient(p) - W.coefficient(p)) < 1e-9 for p in W)


def test_expand_refuses_large_matrices():
    with pytest.raises(ValueError):
        expand(np.eye(8), max_qubits=2)


def test_expansion_rejects_wrong_lengths():
    with pytest.raises(ValueError):
        WeylExpansion(2, {BitVector.from_str("01"): 1.0})


def test_t_tensor_power_support():
    W = expand(clifford.tensor_power(clifford.get_gate("t"), 3))
    assert len(W) == 8
    assert all(p.halves()[0].is_zero() for p in W)


def test_classify_points_group_coset_neither():
    group = classify_points(_points(["0000", "0010", "0100", "0110"]))
    assert group.kind == "group" and group.offset is None
    assert [str(p) for p in group.points()] == ["0000", "0010", "0100", "0110"]

    coset = classify_points(_points(["1000", "1010"]))
    assert coset.kind == "coset"
    assert str(coset.offset) == "1000"
    assert [str(p) for p in coset.points()] == ["1000", "1010"]

    assert classify_points(_points(["0001", "0010", "0100"])).kind == "neither"
    assert classify_points([]).kind == "neither"


def test_hadamard_support_is_coset(hadamard):
    shape = support_is_coset(expand(hadamard))
    assert shape.kind == "coset"
    assert [str(p) for p in shape.points()] == ["01", "10"]


def test_translate_support(cnot):
    W = expand(cnot)
    x = BitVector.from_str("1000")
    translated = translate_support(W, x)
    assert translated == expand(cnot @ PhasedPauli.from_point(x).to_dense()).support()
    with pytest.raises(ValueError):
        translate_support(W, BitVector.from_str("10"))


def test_support_invariant_under_symplectic_image(cnot):
    W = expand(cnot)
    assert support_invariant_under(W, f_d(BitMatrix.from_strings(["11", "01"])))


def test_clifford_support_is_invariant_under_its_image(rng):
    for m in (1, 2, 3):
        for _ in range(10):
            G = clifford.random_clifford(m, rng)
            assert support_invariant_under(expand(G), clifford.phi(G).F)


def test_pauli_recognition(rng):
    for _ in range(20):
        p = PhasedPauli.from_point(BitVector(int(rng.integers(0, 64)), 6), int(rng.integers(8)))
        assert as_phased_pauli(p.to_dense()) == p
        point, scalar = pauli_candidate(2.5 * p.to_dense())
        assert point == p.point
        assert abs(abs(scalar) - 2.5) < 1e-9
    assert as_phased_pauli(2 * np.eye(2)) is None
    assert as_phased_pauli(np.exp(0.1j) * np.eye(2)) is None
    assert pauli_candidate(clifford.get_gate("h")) is None


def test_conjugate_by_clifford_and_non_clifford(hadamard, t_gate):
    X = PhasedPauli.from_string("X")
    assert conjugate(hadamard, X) == PhasedPauli.from_string("Z")
    with pytest.raises(NotClifford):
        conjugate(t_gate, X)


def test_unitarity_and_projective_equality(cnot):
    assert is_unitary(cnot)
    assert not is_unitary(2 * cnot)
    assert not is_unitary(np.ones((2, 4)))
    assert projectively_equal(cnot, 1j * cnot)
    assert not projectively_equal(cnot, np.eye(4))
    assert not projectively_equal(cnot, np.eye(2))
