import numpy as np
import pytest

import clifford
import hierarchy
from errors import NotAffine, NotMonomial, NotThirdLevel, PreconditionError
from gf2 import BitVector
from pauli import PhasedPauli, StabilizerGroup, enumerate_mcs, is_mcs, projector
from weyl import conjugate


@pytest.mark.parametrize(
    "name, level",
    [("x", 1), ("z@y", 1), ("h", 2), ("cnot", 2), ("s@h", 2), ("t", 3), ("cs", 3), ("ccz", 3)],
)
def test_levels_of_named_gates(name, level):
    assert hierarchy.level_of(clifford.get_gate(name)).level == level


def test_square_root_of_t_is_fourth_level():
    sqrt_t = np.diag([1, np.exp(1j * np.pi / 8)])
    verdict = hierarchy.level_of(sqrt_t, 3)
    assert verdict.level is None
    assert verdict.witness is not None
    assert verdict.describe() == "above level 3"
    assert hierarchy.level_of(sqrt_t, 4).level == 4


def test_example_matrix_is_above_third_level(example_matrix):
    verdict = hierarchy.level_of(example_matrix, 3)
    assert verdict.level is None


def test_levels_are_preserved_by_cliffords(rng):
    for _ in range(5):
        G1, G2 = clifford.random_clifford(2, rng), clifford.random_clifford(2, rng)
        assert hierarchy.level_of(G1 @ clifford.get_gate("cs") @ G2).level == 3


def test_level_of_preconditions():
    with pytest.raises(PreconditionError):
        hierarchy.level_of(2 * np.eye(2))
    with pytest.raises(PreconditionError):
        hierarchy.level_of(np.eye(16), 3)
    with pytest.raises(PreconditionError):
        hierarchy.level_of(np.eye(8), 4)
    with pytest.raises(ValueError):
        hierarchy.level_of(np.eye(2), 0)


def test_find_fixed_pauli_on_diagonal_gates():
    for name in ("t", "cs", "ccz"):
        C = clifford.get_gate(name)
        c = hierarchy.find_fixed_pauli(C)
        assert not c.is_zero()
        assert c.halves()[0].is_zero()


def test_find_fixed_pauli_of_clifford_is_least_point(cnot):
    assert str(hierarchy.find_fixed_pauli(cnot)) == "0001"


def test_find_fixed_pauli_on_corpus(third_level):
    for m, corpus in third_level.items():
        for C in corpus:
            c = hierarchy.find_fixed_pauli(C)
            source = hierarchy.fixed_pauli_source(C, c)
            assert conjugate(C, source) == PhasedPauli.from_point(c)


def test_find_fixed_pauli_rejects_fourth_level():
    with pytest.raises(NotThirdLevel):
        hierarchy.find_fixed_pauli(np.diag([1, np.exp(1j * np.pi / 8)]))


def test_clifford_mapping_sends_sources_to_targets(rng):
    sources = [PhasedPauli.from_string(s) for s in ("XZ", "ZI")]
    targets = [PhasedPauli.from_string(s) for s in ("-YY", "IX")]
    G = hierarchy.clifford_mapping(sources, targets)
    assert clifford.is_clifford(G)
    for s, t in zip(sources, targets):
        assert conjugate(G, s) == t


def test_clifford_mapping_preconditions():
    with pytest.raises(PreconditionError):
        hierarchy.clifford_mapping([PhasedPauli.from_string("XI")], [])
    with pytest.raises(PreconditionError):
        hierarchy.clifford_mapping(
            [PhasedPauli.from_string("XI"), PhasedPauli.from_string("ZI")],
            [PhasedPauli.from_string("XI"), PhasedPauli.from_string("IZ")],
        )
    with pytest.raises(PreconditionError):
        hierarchy.clifford_mapping([PhasedPauli.from_string("iX")], [PhasedPauli.from_string("Z")])


def test_pointwise_fixing_correction(rng):
    groups = list(enumerate_mcs(2))
    for _ in range(10):
        C = clifford.random_clifford(2, rng)
        S = groups[int(rng.integers(len(groups)))]
        G = hierarchy.pointwise_fixing_correction(C, S)
        assert hierarchy.fixes_pointwise(G @ C, S)


def test_fixes_pointwise_and_supported_on_differ(cnot):
    z_group = StabilizerGroup.z_group(2)
    assert hierarchy.maps_span(cnot, z_group, z_group)
    assert not hierarchy.supported_on(cnot, z_group)
    assert hierarchy.supported_on(clifford.get_gate("cs"), z_group)
    assert hierarchy.fixes_pointwise(clifford.get_gate("cs"), z_group)


def test_conjugate_group(hadamard):
    group = hierarchy.conjugate_group(hadamard, StabilizerGroup.from_strings(["Z"]))
    assert [str(g) for g in group.generators] == ["X"]


def test_semi_clifford_roundtrip(rng):
    for m in (1, 2, 3):
        for C in hierarchy.monomial_corpus(m, 5, rng):
            parts = hierarchy.semi_clifford_decompose(C)
            assert np.allclose(parts.rebuild(), C, atol=1e-9)
            assert abs(parts.D[0, 0] - 1) < 1e-9


def test_semi_clifford_rejects_non_monomial(rng):
    for U in hierarchy.non_monomial_examples(2, 6, rng):
        with pytest.raises(NotMonomial):
            hierarchy.semi_clifford_decompose(U)


def test_semi_clifford_rejects_toffoli():
    toffoli = np.eye(8, dtype=complex)
    toffoli[6:, 6:] = clifford.get_gate("x")
    with pytest.raises(NotAffine):
        hierarchy.semi_clifford_decompose(toffoli)


def test_semi_clifford_search(cnot, t_gate, third_level):
    assert hierarchy.is_semi_clifford(cnot) is not None
    assert hierarchy.is_semi_clifford(t_gate) is not None
    for C in third_level[2]:
        source, target = hierarchy.is_semi_clifford(C)
        assert hierarchy.conjugate_group(C, source).points() == target.points()
    with pytest.raises(ValueError):
        hierarchy.is_semi_clifford(np.eye(8))


def test_mcs_support_on_diagonal_gates():
    for name in ("t", "cs", "ccz", "t@cnot"):
        C = clifford.get_gate(name)
        result = hierarchy.mcs_support(C)
        assert is_mcs(result.group)
        assert clifford.is_clifford(result.G)
        assert hierarchy.supported_on(result.G @ C, result.group)


def test_mcs_support_on_corpus(third_level):
    for m, corpus in third_level.items():
        for C in corpus:
            result = hierarchy.mcs_support(C)
            GC = result.G @ C
            assert len(result.group.points()) == 1 << m
            assert hierarchy.fixes_pointwise(GC, result.group)
            assert hierarchy.supported_on(GC, result.group)


def test_mcs_support_limits(example_matrix):
    with pytest.raises(NotThirdLevel):
        hierarchy.mcs_support(example_matrix)
    with pytest.raises(ValueError):
        hierarchy.mcs_support(np.eye(16))


def test_generalized_semi_clifford(third_level, cnot):
    assert hierarchy.is_generalized_semi_clifford(cnot)[0]
    assert hierarchy.is_generalized_semi_clifford(cnot, exhaustive=True)[0]
    for m, corpus in third_level.items():
        for C in corpus:
            certified, (source, target) = hierarchy.is_generalized_semi_clifford(C)
            assert certified
            assert hierarchy.maps_span(C, source, target)
    with pytest.raises(ValueError):
        hierarchy.is_generalized_semi_clifford(np.eye(8), exhaustive=True)


def test_corpora_are_third_level(rng):
    for C in hierarchy.third_level_corpus(2, 3, rng):
        assert hierarchy.level_of(C).level in (1, 2, 3)
    diagonal = hierarchy.random_third_level_diagonal(3, rng, factors=5)
    assert np.allclose(diagonal, np.diag(np.diag(diagonal)))
    assert hierarchy.level_of(diagonal).level in (1, 2, 3)


def test_fixed_pauli_source_for_pauli_input():
    X = PhasedPauli.from_string("X").to_dense()
    source = hierarchy.fixed_pauli_source(X, BitVector.from_str("01"))
    assert source == PhasedPauli.from_string("-Z")


def test_fixed_space_of_ccz_is_z_type():
    points = hierarchy.fixed_space(clifford.get_gate("ccz")).span()
    assert points == [BitVector(code, 6) for code in range(8)]


def test_mcs_support_needs_no_search(third_level):
    for name in ("t", "cs", "ccz", "t@cnot"):
        assert not hierarchy.mcs_support(clifford.get_gate(name)).searched
    for corpus in third_level.values():
        for C in corpus:
            assert not hierarchy.mcs_support(C).searched


def test_mcs_support_of_ccz_is_the_positive_z_group():
    result = hierarchy.mcs_support(clifford.get_gate("ccz"))
    assert [str(g) for g in result.group.generators] == ["ZII", "IZI", "IIZ"]


def test_supported_operators_fix_their_group(rng):
    for S in enumerate_mcs(2):
        U = sum(np.exp(2j * np.pi * rng.random()) * projector(S, BitVector(code, 2)) for code in range(4))
        assert hierarchy.supported_on(U, S)
        assert hierarchy.fixes_pointwise(U, S)
        G = clifford.random_clifford(2, rng)
        image = hierarchy.conjugate_group(G, S)
        assert hierarchy.supported_on(G @ U @ G.conj().T, image)
        assert hierarchy.fixes_pointwise(G @ U @ G.conj().T, image)


def test_levels_are_invariant_under_clifford_conjugation(third_level, rng):
    for C in third_level[3] + [clifford.get_gate("ccz")]:
        G = clifford.random_clifford(3, rng)
        assert hierarchy.level_of(G @ C @ G.conj().T, 3).level == hierarchy.level_of(C, 3).level
