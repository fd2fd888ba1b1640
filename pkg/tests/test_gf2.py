import numpy as np
import pytest

from errors import NotSymplectic
from gf2 import (
    BitMatrix,
    BitVector,
    SymplecticMatrix,
    apply_transvection,
    bruhat_decompose,
    compose_transvections,
    dual_space,
    enumerate_symplectic,
    f_d,
    f_omega,
    f_u,
    fix_space,
    is_hyperbolic,
    is_involution,
    is_symplectic,
    map_vector,
    omega,
    random_invertible,
    random_symmetric,
    random_symplectic,
    res_space,
    symplectic_inner,
    transvection,
    transvection_decompose,
)


def test_bitvector_packing_is_msb_first():
    v = BitVector.from_str("0110")
    assert v.value == 6
    assert list(v) == [0, 1, 1, 0]
    assert v[1] == 1 and v[-1] == 0
    assert str(BitVector.unit(0, 4)) == "1000"
    assert BitVector.from_str("01|10") == v


def test_bitvector_halves_and_concat():
    a, b = BitVector.from_str("101100").halves()
    assert (str(a), str(b)) == ("101", "100")
    assert BitVector.concat(a, b) == BitVector.from_str("101100")


def test_bitvector_ordering_matches_string_order():
    points = [BitVector.from_str(s) for s in ("0110", "0001", "1000", "0000")]
    assert [str(p) for p in sorted(points)] == ["0000", "0001", "0110", "1000"]


def test_bitvector_rejects_bad_input():
    with pytest.raises(ValueError):
        BitVector(0, 0)
    with pytest.raises(ValueError):
        BitVector(4, 2)
    with pytest.raises(ValueError):
        BitVector.from_str("01a")
    with pytest.raises(ValueError):
        BitVector.from_str("01") ^ BitVector.from_str("011")


def test_dot_and_weight():
    u, v = BitVector.from_str("1101"), BitVector.from_str("0111")
    assert u.weight() == 3
    assert u.dot(v) == 0
    assert BitVector.from_str("1000").dot(BitVector.from_str("1001")) == 1


def test_rref_left_transform_and_pivots():
    M = BitMatrix.from_strings(["110", "011", "101"])
    reduced, left, pivots = M.rref()
    assert left @ M == reduced
    assert pivots == [0, 1]
    assert M.rank() == 2
    assert M.row_basis() == BitMatrix.from_strings(["101", "011"])


def test_left_kernel_annihilates():
    M = BitMatrix.from_strings(["110", "011", "101"])
    kernel = M.left_kernel()
    assert kernel.nrows == 1
    assert (kernel @ M).is_zero()
    assert kernel.row(0) == BitVector.from_str("111")


def test_inverse_and_singular_matrix(rng):
    for _ in range(20):
        P = random_invertible(4, rng)
        assert P @ P.inverse() == BitMatrix.identity(4)
    with pytest.raises(ValueError):
        BitMatrix.from_strings(["11", "11"]).inverse()


def test_solve_and_contains():
    M = BitMatrix.from_strings(["1100", "0110"])
    target = BitVector.from_str("1010")
    x = M.solve(target)
    assert x is not None and x @ M == target
    assert M.solve(BitVector.from_str("0001")) is None
    assert M.contains(BitVector.zeros(4))
    assert not M.contains(BitVector.from_str("1000"))


def test_span_enumerates_row_space():
    M = BitMatrix.from_strings(["1100", "0011"])
    assert [str(v) for v in M.span()] == ["0000", "0011", "1100", "1111"]


def test_omega_and_symplectic_inner():
    m = 2
    form = omega(m)
    assert form.is_symmetric()
    x, y = BitVector.from_str("1000"), BitVector.from_str("0010")
    assert symplectic_inner(x, y) == 1
    assert symplectic_inner(x, BitVector.from_str("0001")) == 0
    assert symplectic_inner(x, x) == 0


def test_transvection_action_formula():
    v = BitVector.from_str("0010")
    T = transvection(v)
    assert is_symplectic(T)
    assert BitVector.from_str("1000") @ T == BitVector.from_str("1010")
    assert BitVector.from_str("0100") @ T == BitVector.from_str("0100")
    assert T @ T == BitMatrix.identity(4)
    for code in range(16):
        x = BitVector(code, 4)
        assert x @ T == apply_transvection(v, x)


def test_symplectic_matrix_rejects_non_symplectic():
    with pytest.raises(NotSymplectic):
        SymplecticMatrix(BitMatrix.from_strings(["1100", "0100", "0010", "0001"]))


def test_standard_families_are_symplectic(rng):
    for m in (1, 2, 3):
        assert is_symplectic(f_d(random_invertible(m, rng)))
        assert is_symplectic(f_u(random_symmetric(m, rng)))
        for r in range(m + 1):
            assert is_symplectic(f_omega(r, m))
    with pytest.raises(ValueError):
        f_u(BitMatrix.from_strings(["01", "00"]))
    with pytest.raises(ValueError):
        f_omega(3, 2)


def test_f_cnot_is_hyperbolic_involution():
    F = f_d(BitMatrix.from_strings(["11", "01"]))
    assert is_involution(F)
    assert is_hyperbolic(F)
    assert [str(v) for v in fix_space(F).span()] == ["0000", "0010", "0100", "0110"]
    assert res_space(F).nrows == 2


def test_fix_and_res_are_symplectic_duals(rng):
    for _ in range(10):
        F = random_symplectic(3, rng)
        assert set(dual_space(res_space(F)).span()) == set(fix_space(F).span())


def test_dual_space_forms():
    V = BitMatrix.from_strings(["1000"])
    assert set(dual_space(V).span()) == {v for v in BitMatrix.identity(4).span() if v[2] == 0}
    assert set(dual_space(V, "euclidean").span()) == {v for v in BitMatrix.identity(4).span() if v[0] == 0}
    with pytest.raises(ValueError):
        dual_space(V, "hermitian")


def test_enumerate_sp2_has_six_elements():
    elements = list(enumerate_symplectic(1))
    assert len(elements) == 6
    assert len(set(elements)) == 6


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_bruhat_recomposes(m, rng):
    for _ in range(25):
        F = random_symplectic(m, rng)
        parts = bruhat_decompose(F)
        assert parts.recompose() == F
        assert 0 <= parts.rank <= m
        assert parts.s1.is_symmetric() and parts.s2.is_symmetric()


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_transvection_decompose_recomposes(m, rng):
    for _ in range(25):
        F = random_symplectic(m, rng)
        factors = transvection_decompose(F)
        assert compose_transvections(factors, 2 * m) == F


def test_identity_needs_no_transvections():
    assert transvection_decompose(SymplecticMatrix.identity(4)) == []


def test_cnot_image_uses_three_transvections():
    F = f_d(BitMatrix.from_strings(["11", "01"]))
    factors = transvection_decompose(F)
    assert len(factors) == 3
    assert compose_transvections(factors, 4) == F


def test_map_vector_fixes_given_vectors(rng):
    n = 6
    e = BitVector.unit(0, n)
    f = BitVector.unit(3, n)
    for _ in range(30):
        x = BitVector(int(rng.integers(1, 1 << n)), n)
        y = BitVector(int(rng.integers(1, 1 << n)), n)
        if e in (x, y) or symplectic_inner(x, e) != symplectic_inner(y, e):
            continue
        hs = map_vector(x, y, [e])
        assert len(hs) <= 2
        image = x
        for h in hs:
            image = apply_transvection(h, image)
            assert symplectic_inner(h, e) == 0
        assert image == y
    with pytest.raises(ValueError):
        map_vector(e, BitVector.zeros(n))
    with pytest.raises(ValueError):
        map_vector(BitVector.unit(1, n), f, [BitVector.unit(4, n)])


def test_random_symplectic_is_reproducible():
    first = random_symplectic(3, np.random.default_rng(11))
    second = random_symplectic(3, np.random.default_rng(11))
    assert first == second


def _commuting_vectors(m, rng):
    n = 2 * m
    vectors = []
    for _ in range(int(rng.integers(1, m + 2))):
        room = dual_space(BitMatrix.from_rows(vectors, ncols=n)).span() if vectors else BitMatrix.identity(n).span()
        choices = [v for v in room if not v.is_zero()]
        vectors.append(choices[int(rng.integers(len(choices)))])
    return vectors


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_involution_factor_counts(m, rng):
    n = 2 * m
    for _ in range(30):
        F = compose_transvections(_commuting_vectors(m, rng), n)
        if F == BitMatrix.identity(n):
            continue
        assert is_involution(F)
        residue = res_space(F)
        factors = transvection_decompose(F)
        assert compose_transvections(factors, n) == F
        if is_hyperbolic(F):
            assert len(factors) == residue.nrows + 1
        else:
            assert len(factors) == residue.nrows
            assert BitMatrix.from_rows(factors).rank() == residue.nrows
            assert all(residue.contains(v) for v in factors)


def test_hyperbolic_and_plain_involutions():
    assert is_hyperbolic(f_u(BitMatrix.from_strings(["01", "10"])))
    assert not is_hyperbolic(f_u(BitMatrix.from_strings(["10", "00"])))
    assert len(transvection_decompose(f_u(BitMatrix.from_strings(["01", "10"])))) == 3


def test_is_hyperbolic_needs_an_involution():
    with pytest.raises(ValueError):
        is_hyperbolic(f_d(BitMatrix.from_strings(["11", "10"])))
