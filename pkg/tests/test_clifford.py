import numpy as np
import pytest

import clifford
from errors import NotClifford, PreconditionError
from gf2 import (
    BitMatrix,
    BitVector,
    dual_space,
    f_d,
    f_omega,
    f_u,
    is_involution,
    random_invertible,
    random_symmetric,
    random_symplectic,
    transvection,
    transvection_decompose,
)
from weyl import expand, projectively_equal, support_is_coset


def _all_matrices(m):
    for code in range(1 << (m * m)):
        yield BitMatrix(np.array([(code >> s) & 1 for s in range(m * m - 1, -1, -1)]).reshape(m, m))


def test_get_gate_placement():
    assert np.allclose(clifford.get_gate("h@i"), np.kron(clifford.get_gate("h"), np.eye(2)))
    assert clifford.get_gate("cnot@t").shape == (8, 8)
    with pytest.raises(NotImplementedError):
        clifford.get_gate("toffoli")


def test_tensor_power():
    assert clifford.tensor_power(clifford.get_gate("x"), 3).shape == (8, 8)
    with pytest.raises(ValueError):
        clifford.tensor_power(clifford.get_gate("x"), 0)


def test_phi_of_standard_gates(rng, cnot, hadamard):
    assert clifford.phi(cnot).F == f_d(BitMatrix.from_strings(["11", "01"]))
    assert clifford.phi(hadamard).F == f_omega(1, 1)
    for m in (1, 2, 3):
        P = random_invertible(m, rng)
        S = random_symmetric(m, rng)
        assert clifford.phi(clifford.gate_gd(P)).F == f_d(P)
        assert clifford.phi(clifford.gate_gu(S)).F == f_u(S)


def test_phi_signs(hadamard):
    Y = clifford.get_gate("y")
    tableau = clifford.phi(hadamard @ Y)
    assert tableau.F == f_omega(1, 1)
    assert str(tableau.signs) == "11"


def test_phi_rejects_non_clifford(t_gate, example_matrix):
    with pytest.raises(NotClifford):
        clifford.phi(t_gate)
    with pytest.raises(NotClifford):
        clifford.phi(example_matrix)
    with pytest.raises(PreconditionError):
        clifford.phi(2 * np.eye(2))
    assert not clifford.is_clifford(clifford.get_gate("ccz"))


def test_phi_composition_order(rng):
    for _ in range(10):
        G1 = clifford.random_clifford(2, rng)
        G2 = clifford.random_clifford(2, rng)
        assert clifford.phi(G1 @ G2).F == clifford.phi(G2).F @ clifford.phi(G1).F


def test_clifford_transvection_maps_to_transvection(rng):
    for _ in range(10):
        v = BitVector(int(rng.integers(1, 64)), 6)
        G = clifford.clifford_transvection(v)
        assert clifford.phi(G).F == transvection(v)
        assert len(expand(G)) == 2
    with pytest.raises(ValueError):
        clifford.clifford_transvection(BitVector.zeros(4))
    with pytest.raises(ValueError):
        clifford.clifford_transvection(BitVector.from_str("0001"), sign=2)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_preimages(m, rng):
    for _ in range(10):
        F = random_symplectic(m, rng)
        assert clifford.phi(clifford.preimage(F)).F == F
        assert clifford.phi(clifford.bruhat_gate(F)).F == F


def test_random_clifford_is_clifford(rng):
    for m in (1, 2, 3):
        assert clifford.is_clifford(clifford.random_clifford(m, rng))


def test_hermitian_clifford_has_involutive_image(cnot, hadamard):
    for G in (cnot, hadamard, clifford.get_gate("swap"), clifford.get_gate("cz")):
        assert is_involution(clifford.phi(G).F)


def test_transvection_product_matches_closed_form(rng):
    for _ in range(40):
        m = int(rng.integers(1, 4))
        n = 2 * m
        k = int(rng.integers(1, min(4, n) + 1))
        C = BitMatrix(rng.integers(0, 2, size=(k, n)))
        if C.rank() < k:
            continue
        c0 = BitVector(int(rng.integers(0, 1 << n)), n)
        dense = expand(clifford.transvection_product(c0, C))
        closed = clifford.hermitian_product_coefficients(c0, C)
        assert dense.support() == closed.support()
        for point in closed:
            assert abs(dense.coefficient(point) - closed.coefficient(point)) < 1e-9


def test_hermitian_criterion(rng):
    for _ in range(40):
        m = int(rng.integers(1, 4))
        F = random_symplectic(m, rng)
        k = int(rng.integers(1, m + 1))
        rows = [BitVector.unit(m + j, 2 * m) @ F for j in range(k)]
        c0 = BitVector.from_bits([1] * k + [0] * (2 * m - k)) @ F
        C = BitMatrix.from_rows(rows)
        G = clifford.transvection_product(c0, C)
        hermitian = np.allclose(G, G.conj().T)
        assert clifford.is_hermitian_product(c0, C) == hermitian
        assert hermitian
        assert abs(np.trace(G)) < 1e-9


def test_hermitian_criterion_rejects_commuting_prefix():
    c0 = BitVector.from_str("0001")
    C = BitMatrix.from_strings(["1000"])
    G = clifford.transvection_product(c0, C)
    assert not clifford.is_hermitian_product(c0, C)
    assert not np.allclose(G, G.conj().T)


def test_closed_form_needs_independent_rows():
    with pytest.raises(PreconditionError):
        clifford.hermitian_product_coefficients(BitVector.zeros(4), BitMatrix.from_strings(["1000", "1000"]))


def test_cnot_three_factor_identity(cnot):
    vectors = transvection_decompose(clifford.phi(cnot).F)
    product = clifford.transvection_product(BitVector.zeros(4), BitMatrix.from_rows(vectors[::-1]))
    assert len(vectors) == 3
    assert len(expand(product @ cnot.conj().T)) == 1


def test_diagonal_transvections(rng):
    for m in (1, 2, 3):
        for _ in range(10):
            S = random_symmetric(m, rng)
            parts = clifford.diagonal_transvections(S)
            assert all(v.halves()[0].is_zero() for v in parts.vectors)
            assert projectively_equal(parts.dense(), clifford.gate_gu(S))


def test_standard_supports_exhaustive_two_qubits():
    for P in _all_matrices(2):
        if P.is_invertible():
            assert clifford.support_gd(P).points() == expand(clifford.gate_gd(P)).points()
    for S in _all_matrices(2):
        if S.is_symmetric():
            assert clifford.support_gu(S).points() == expand(clifford.gate_gu(S)).points()
    for r in range(3):
        assert clifford.support_gomega(r, 2).points() == expand(clifford.gate_gomega(r, 2)).points()


def test_standard_supports_random(rng):
    for m in (3, 4):
        for _ in range(5):
            P, S = random_invertible(m, rng), random_symmetric(m, rng)
            assert clifford.support_standard("gd", P).points() == expand(clifford.gate_gd(P)).points()
            assert clifford.support_standard("gu", S).points() == expand(clifford.gate_gu(S)).points()
    with pytest.raises(NotImplementedError):
        clifford.support_standard("gx", 1, 2)
    with pytest.raises(ValueError):
        clifford.support_standard("gomega", 1)


def test_cz_support_is_the_z_group():
    S = BitMatrix.from_strings(["01", "10"])
    shape = clifford.support_gu(S)
    assert shape.kind == "group"
    assert [str(p) for p in shape.points()] == ["0000", "0001", "0010", "0011"]


def test_local_supports(rng):
    for _ in range(20):
        factors = [clifford.random_clifford(1, rng) for _ in range(int(rng.integers(1, 5)))]
        assert clifford.support_local(factors) == expand(clifford.tensor(*factors)).support()
    with pytest.raises(ValueError):
        clifford.support_local([np.eye(4)])


def test_interleave():
    assert str(clifford.interleave(BitVector.from_str("1011"))) == "1101"


def test_commutant_of_cnot_equals_support(cnot):
    commuting = clifford.commutant(cnot)
    assert commuting.span() == expand(cnot).points()


def test_counterexample_has_empty_commutant(counterexample):
    assert clifford.is_clifford(counterexample)
    assert clifford.commutant(counterexample).nrows == 0


def test_support_inside_dual_commutant(rng):
    for _ in range(20):
        m = int(rng.integers(1, 4))
        G = clifford.random_clifford(m, rng)
        W = expand(G)
        assert W.support() <= set(dual_space(clifford.commutant(G)).span())
        shape = support_is_coset(W)
        assert shape.kind != "neither"
        assert (shape.kind == "group") == (abs(np.trace(G)) > 1e-6)
