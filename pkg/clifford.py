"""
The Clifford group and its symplectic image.

A Clifford G satisfies G E(c) G† = ±E(c F_G) for a symplectic F_G; the map
G -> F_G (phi) has the phased Paulis as kernel. Under the row-vector action the
composition order is F_{G1 G2} = F_{G2} F_{G1}.

Key components:
1. Named gates, a get_gate factory with "h@i" tensor placement, and the
   standard families G_D(P), G_U(S), G_Ω(r).
2. phi / preimage / bruhat_gate between dense Cliffords and Sp(2m).
3. Products of Clifford transvections E(c0) ∏ (I + iE(c_n))/√2 with their
   closed-form Pauli coefficients and the Hermiticity criterion.
4. Closed-form supports of the standard families and of local Cliffords,
   and the commutant C_G.
"""
from __future__ import annotations

import logging
from functools import reduce
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Set, Tuple, Union

import numpy as np

from config import DEFAULT_MAX_QUBITS, DEFAULT_TOLERANCE
from errors import NotClifford, PreconditionError
from gf2 import (
    BitMatrix,
    BitVector,
    SymplecticMatrix,
    bruhat_decompose,
    dual_space,
    fix_space,
    is_symplectic,
    random_symplectic,
    symplectic_inner,
    transvection_decompose,
)
from pauli import PhasedPauli, to_dense
from weyl import SupportShape, WeylExpansion, classify_points, conjugate, expand, is_unitary, num_qubits

logger = logging.getLogger(__name__)

_SQRT2 = np.sqrt(2.0)
_I_POWERS = (1, 1j, -1, -1j)

# Named gates #################################################################


def _diagonal(values: Sequence[complex]) -> np.ndarray:
    return np.diag(np.asarray(values, dtype=complex))


GATES: Dict[str, Callable[[], np.ndarray]] = {
    "i": lambda: np.eye(2, dtype=complex),
    "identity": lambda: np.eye(2, dtype=complex),
    "h": lambda: np.array([[1, 1], [1, -1]], dtype=complex) / _SQRT2,
    "s": lambda: _diagonal([1, 1j]),
    "x": lambda: np.array([[0, 1], [1, 0]], dtype=complex),
    "y": lambda: np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": lambda: _diagonal([1, -1]),
    "t": lambda: _diagonal([1, np.exp(1j * np.pi / 4)]),
    "cnot": lambda: np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "cz": lambda: _diagonal([1, 1, 1, -1]),
    "cs": lambda: _diagonal([1, 1, 1, 1j]),
    "swap": lambda: np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
    "ccz": lambda: _diagonal([1] * 7 + [-1]),
}


def tensor(*gates: np.ndarray) -> np.ndarray:
    """Kronecker product with the first gate on qubit 1."""
    return reduce(np.kron, gates)


def tensor_power(G: np.ndarray, k: int) -> np.ndarray:
    if k < 1:
        raise ValueError(f"tensor power must be at least 1, got {k}")
    return tensor(*([np.asarray(G, dtype=complex)] * k))


def get_gate(name: str) -> np.ndarray:
    """
    Dense matrix of a named gate, with '@' placing factors on consecutive qubits.

    Args:
        name (str): A gate name such as 'cnot', or a placement like 'h@i@t'.

    Returns:
        np.ndarray: The dense unitary.

    Raises:
        NotImplementedError: If any factor is not a known gate.
    """
    factors = []
    for part in name.lower().split("@"):
        part = part.strip()
        if part not in GATES:
            raise NotImplementedError(f"Gate '{part}' is not implemented.")
        factors.append(GATES[part]())
    return tensor(*factors)


# Standard families ###########################################################


def _basis_bits(m: int) -> np.ndarray:
    """Row v holds the bits of basis state |v⟩, most significant first."""
    shifts = np.arange(m - 1, -1, -1)
    return (np.arange(1 << m)[:, None] >> shifts[None, :]) & 1


def _bits_to_index(bits: np.ndarray) -> np.ndarray:
    m = bits.shape[1]
    return bits @ (1 << np.arange(m - 1, -1, -1))


def gate_gd(P: BitMatrix) -> np.ndarray:
    """G_D(P) = Σ_v |vP⟩⟨v|."""
    if not P.is_invertible():
        raise ValueError("G_D needs an invertible P")
    m = P.nrows
    images = _bits_to_index(_basis_bits(m) @ P.data.astype(np.int64) % 2)
    G = np.zeros((1 << m, 1 << m), dtype=complex)
    G[images, np.arange(1 << m)] = 1
    return G


def gate_gu(S: BitMatrix) -> np.ndarray:
    """G_U(S) = diag(i^{vSv^t mod 4}) with the quadratic form taken over the integers."""
    if not S.is_symmetric():
        raise ValueError("G_U needs a symmetric S")
    bits = _basis_bits(S.nrows)
    quadratic = np.einsum("vi,ij,vj->v", bits, S.data.astype(np.int64), bits) % 4
    return np.diag(np.array([1, 1j, -1, -1j])[quadratic])


def gate_gomega(r: int, m: int) -> np.ndarray:
    """G_Ω(r) = H^{⊗r} ⊗ I^{⊗(m-r)}."""
    if not 0 <= r <= m:
        raise ValueError(f"r must lie in [0, {m}], got {r}")
    factors = [GATES["h"]()] * r + [GATES["i"]()] * (m - r)
    return tensor(*factors)


# Symplectic image ############################################################


class CliffordTableau(NamedTuple):
    """
    Symplectic image of a Clifford with conjugation signs.

    G E(e_i) G† = (-1)^{signs_i} E(e_i F) for each unit vector e_i of F2^{2m}.
    """

    F: SymplecticMatrix
    signs: BitVector

    @property
    def m(self) -> int:
        return self.F.m


def _require_unitary(G: np.ndarray, tol: float) -> None:
    if not is_unitary(G, tol):
        raise PreconditionError("operator is not unitary")


def phi(G: np.ndarray, tol: float = DEFAULT_TOLERANCE) -> CliffordTableau:
    """
    The tableau of a Clifford.

    Raises:
        PreconditionError: If G is not unitary.
        NotClifford: If some conjugate of a Pauli generator is not a Hermitian Pauli.
    """
    G = np.asarray(G, dtype=complex)
    m = num_qubits(G)
    _require_unitary(G, tol)
    n = 2 * m
    rows, signs = [], []
    for i in range(n):
        image = conjugate(G, PhasedPauli.from_point(BitVector.unit(i, n)), tol)
        if not image.is_hermitian():
            raise NotClifford(f"conjugate {image} of a Hermitian Pauli is not Hermitian")
        rows.append(image.point)
        signs.append(1 if image.phase == 4 else 0)
    F = BitMatrix.from_rows(rows)
    if not is_symplectic(F):
        raise NotClifford("conjugation images do not form a symplectic matrix")
    return CliffordTableau(SymplecticMatrix(F, check=False), BitVector.from_bits(signs))


def is_clifford(G: np.ndarray, tol: float = DEFAULT_TOLERANCE) -> bool:
    try:
        phi(G, tol)
    except NotClifford:
        return False
    return True


def clifford_transvection(v: BitVector, sign: int = 1, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    """G_v = (I + sign·i E(v)) / √2, whose image under phi is T_v."""
    if v.is_zero():
        raise ValueError("a Clifford transvection needs a nonzero vector")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    E = to_dense(PhasedPauli.from_point(v), max_qubits=max_qubits)
    return (np.eye(E.shape[0]) + sign * 1j * E) / _SQRT2


def preimage(F: SymplecticMatrix, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    """
    A Clifford G with phi(G).F = F, defined up to a Pauli and a global phase.

    With F = T_{v_1} ... T_{v_k} the preimage is G_{v_k} ... G_{v_1}.
    """
    G = np.eye(1 << F.m, dtype=complex)
    for v in transvection_decompose(F):
        G = clifford_transvection(v, max_qubits=max_qubits) @ G
    return G


def bruhat_gate(F: SymplecticMatrix) -> np.ndarray:
    """G_D(P2) G_U(S2) G_Ω(r) G_U(S1) G_D(P1), a preimage of F through its Bruhat cell."""
    cell = bruhat_decompose(F)
    return (
        gate_gd(cell.p2)
        @ gate_gu(cell.s2)
        @ gate_gomega(cell.rank, F.m)
        @ gate_gu(cell.s1)
        @ gate_gd(cell.p1)
    )


def random_clifford(m: int, rng: np.random.Generator, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    """A random Pauli times the preimage of a random symplectic matrix."""
    point = BitVector(int(rng.integers(0, 1 << (2 * m))), 2 * m)
    pauli = to_dense(PhasedPauli.from_point(point), max_qubits=max_qubits)
    return pauli @ preimage(random_symplectic(m, rng), max_qubits=max_qubits)


# Products of transvections ###################################################

RowsLike = Union[BitMatrix, Sequence[BitVector]]


def _as_rows(C: RowsLike, n: int) -> BitMatrix:
    if isinstance(C, BitMatrix):
        return C
    return BitMatrix.from_rows(list(C), ncols=n)


def transvection_product(
    c0: BitVector,
    C: RowsLike,
    signs: Optional[Sequence[int]] = None,
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> np.ndarray:
    """
    Dense E(c0) ∏_n (I + s_n iE(c_n))/√2, factors multiplied left to right.

    Rows of C may be dependent; this is the oracle path for products the closed
    form does not cover.
    """
    rows = _as_rows(C, len(c0)).rows
    signs = [1] * len(rows) if signs is None else list(signs)
    if len(signs) != len(rows):
        raise ValueError(f"{len(signs)} signs given for {len(rows)} factors")
    G = to_dense(PhasedPauli.from_point(c0), max_qubits=max_qubits)
    for row, sign in zip(rows, signs):
        G = G @ clifford_transvection(row, sign, max_qubits=max_qubits)
    return G


def _require_independent(C: BitMatrix) -> None:
    if C.rank() != C.nrows:
        raise PreconditionError("transvection vectors must be linearly independent")


def hermitian_product_coefficients(c0: BitVector, C: RowsLike) -> WeylExpansion:
    """
    Closed-form Pauli coefficients of E(c0) ∏_n (I + iE(c_n))/√2.

    For d in F2^k the term E(c0 + dC) carries
    2^{-k/2} i^{|d| + Σ_{i<j} d_i d_j C̃_ij + (dA)·b0 - a0·(dB) + ā·b̄ - a'·b'}
    where C = (A B) and c0 = (a0 b0) are read as 0/1 integers, (ā, b̄) = c0 + dC over
    the integers, (a', b') is its reduction mod 2, and C̃_ij = a_j·b_i - a_i·b_j.

    Raises:
        PreconditionError: If the rows of C are dependent.
    """
    n = len(c0)
    m = n // 2
    rows = _as_rows(C, n)
    _require_independent(rows)
    k = rows.nrows
    data = rows.data.astype(np.int64)
    A, B = data[:, :m], data[:, m:]
    bits0 = c0.bits.astype(np.int64)
    a0, b0 = bits0[:m], bits0[m:]
    twisted = np.triu(B @ A.T - A @ B.T, 1)
    scale = 2.0 ** (-k / 2)

    coefficients: Dict[BitVector, complex] = {}
    for code in range(1 << k):
        d = np.array([(code >> (k - 1 - i)) & 1 for i in range(k)], dtype=np.int64)
        dA, dB = d @ A, d @ B
        a_bar, b_bar = a0 + dA, b0 + dB
        exponent = (
            d.sum()
            + d @ twisted @ d
            + dA @ b0
            - a0 @ dB
            + a_bar @ b_bar
            - (a_bar % 2) @ (b_bar % 2)
        )
        point = BitVector.from_bits(np.concatenate([a_bar % 2, b_bar % 2]))
        coefficients[point] = scale * _I_POWERS[int(exponent) % 4]
    return WeylExpansion(m, coefficients)


def is_hermitian_product(c0: BitVector, C: RowsLike) -> bool:
    """
    E(c0) ∏ (I + iE(c_n))/√2 with independent c_n is Hermitian iff E(c0)
    anticommutes with every E(c_n) and the E(c_n) commute pairwise.
    """
    rows = _as_rows(C, len(c0))
    _require_independent(rows)
    vectors = rows.rows
    if not all(symplectic_inner(c0, v) for v in vectors):
        return False
    return all(symplectic_inner(u, v) == 0 for i, u in enumerate(vectors) for v in vectors[i + 1:])


class DiagonalTransvections(NamedTuple):
    """G_U(S) ∝ E(0, z) ∏_b (I - iE(0, b))/√2 over the listed points (0|b)."""

    z: BitVector
    vectors: List[BitVector]

    def dense(self, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
        m = len(self.z)
        c0 = BitVector.concat(BitVector.zeros(m), self.z)
        return transvection_product(c0, BitMatrix.from_rows(self.vectors, ncols=2 * m), [-1] * len(self.vectors), max_qubits)


def diagonal_transvections(S: BitMatrix) -> DiagonalTransvections:
    """
    Write the diagonal Clifford G_U(S) as Z-type transvections.

    Each off-diagonal S_ij = 1 (i < j) contributes b = e_i + e_j, and b = e_i is added
    where the diagonal parity is not yet matched; the leftover even part of the
    linear phase becomes the Pauli E(0, z).
    """
    if not S.is_symmetric():
        raise ValueError("diagonal_transvections needs a symmetric S")
    m = S.nrows
    zero = BitVector.zeros(m)
    vectors: List[BitVector] = []
    count = np.zeros(m, dtype=np.int64)
    for i in range(m):
        for j in range(i + 1, m):
            if S.data[i, j]:
                vectors.append(BitVector.concat(zero, BitVector.unit(i, m) ^ BitVector.unit(j, m)))
                count[i] += 1
                count[j] += 1
    z_bits = []
    for i in range(m):
        single = (int(S.data[i, i]) - count[i]) % 2
        if single:
            vectors.append(BitVector.concat(zero, BitVector.unit(i, m)))
        z_bits.append(((int(S.data[i, i]) - count[i] - single) // 2) % 2)
    return DiagonalTransvections(BitVector.from_bits(z_bits), vectors)


# Supports ####################################################################


def _shape(base: BitMatrix, offset: BitVector) -> SupportShape:
    return classify_points(offset ^ x for x in base.span())


def _pad(rows: BitMatrix, left: bool, m: int) -> BitMatrix:
    zeros = np.zeros((rows.nrows, m), dtype=np.uint8)
    parts = [rows.data, zeros] if left else [zeros, rows.data]
    return BitMatrix(np.hstack(parts))


def support_gd(P: BitMatrix) -> SupportShape:
    """supp(G_D(P)) = Res(P^{-1}) × Fix(P)^⊥ with ⊥ the euclidean complement."""
    if not P.is_invertible():
        raise ValueError("G_D needs an invertible P")
    m = P.nrows
    eye = BitMatrix.identity(m)
    residue = (eye + P.inverse()).row_basis()
    fixed_dual = dual_space((eye + P).left_kernel(), form="euclidean")
    base = BitMatrix.vstack(_pad(residue, True, m), _pad(fixed_dual, False, m))
    return _shape(base, BitVector.zeros(2 * m))


def gu_coset_witness(S: BitMatrix) -> BitVector:
    """
    The c with 2 w·c = w S w^t mod 4 for every w in ker S.

    The quadratic form is even on ker S, so c is a solution of a linear system over F2.
    """
    m = S.nrows
    kernel = S.left_kernel()
    if not kernel.nrows:
        return BitVector.zeros(m)
    data = kernel.data.astype(np.int64)
    halves = (np.einsum("ki,ij,kj->k", data, S.data.astype(np.int64), data) % 4) // 2
    witness = kernel.T.solve(BitVector.from_bits(halves))
    if witness is None:
        raise PreconditionError("no coset witness for S")
    return witness


def support_gu(S: BitMatrix) -> SupportShape:
    """supp(G_U(S)) = {0} × (c + W^⊥) with W = ker S and c the coset witness."""
    if not S.is_symmetric():
        raise ValueError("G_U needs a symmetric S")
    m = S.nrows
    complement = dual_space(S.left_kernel(), form="euclidean")
    offset = BitVector.concat(BitVector.zeros(m), gu_coset_witness(S))
    return _shape(_pad(complement, False, m), offset)


def support_gomega(r: int, m: int) -> SupportShape:
    """supp(G_Ω(r)) = (1_r 0 | 0) + span{(e_i | e_i) : i < r}."""
    if not 0 <= r <= m:
        raise ValueError(f"r must lie in [0, {m}], got {r}")
    rows = [BitVector.concat(BitVector.unit(i, m), BitVector.unit(i, m)) for i in range(r)]
    ones = BitVector.from_bits([1] * r + [0] * (2 * m - r))
    return _shape(BitMatrix.from_rows(rows, ncols=2 * m), ones)


def support_standard(kind: str, parameter: Union[BitMatrix, int], m: Optional[int] = None) -> SupportShape:
    """
    Closed-form support of G_D(P), G_U(S) or G_Ω(r).

    Args:
        kind (str): One of 'gd', 'gu', 'gomega'.
        parameter (Union[BitMatrix, int]): P, S or r.
        m (Optional[int]): Number of qubits, required for 'gomega'.
    """
    if kind == "gd":
        return support_gd(parameter)
    if kind == "gu":
        return support_gu(parameter)
    if kind == "gomega":
        if m is None:
            raise ValueError("gomega needs m")
        return support_gomega(int(parameter), m)
    raise NotImplementedError(f"Standard family '{kind}' is not implemented.")


def interleave(point: BitVector) -> BitVector:
    """σ: (a_1, b_1, ..., a_m, b_m) -> (a_1, ..., a_m, b_1, ..., b_m)."""
    bits = point.bits
    return BitVector.from_bits(np.concatenate([bits[0::2], bits[1::2]]))


def support_local(gates: Sequence[np.ndarray], tol: float = DEFAULT_TOLERANCE) -> Set[BitVector]:
    """supp(G_1 ⊗ ... ⊗ G_m) = σ(supp(G_1) × ... × supp(G_m)) for 2 x 2 factors."""
    factor_supports = []
    for gate in gates:
        gate = np.asarray(gate)
        if gate.shape != (2, 2):
            raise ValueError(f"local factors must be 2 x 2, got {gate.shape}")
        factor_supports.append([str(p) for p in expand(gate, tol=tol).points()])
    combined = reduce(lambda acc, options: [x + y for x in acc for y in options], factor_supports, [""])
    return {interleave(BitVector.from_str(bits)) for bits in combined}


def commutant(G: np.ndarray, tol: float = DEFAULT_TOLERANCE) -> BitMatrix:
    """
    Basis of C_G = {c in Fix(F_G) : G E(c) G† = E(c)}.

    The conjugation sign is linear on Fix(F_G), so C_G is the kernel of that
    functional.
    """
    tableau = phi(G, tol)
    fixed = fix_space(tableau.F)
    rows = fixed.rows
    signs = [conjugate(G, PhasedPauli.from_point(c), tol).phase == 4 for c in rows]
    if not any(signs):
        return fixed
    pivot = signs.index(True)
    kept = [row ^ rows[pivot] if sign else row for row, sign in zip(rows, signs)]
    del kept[pivot]
    logger.debug("commutant drops one dimension from Fix of size %d", len(rows))
    return BitMatrix.from_rows(kept, ncols=2 * tableau.m)
