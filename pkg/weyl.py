"""
Weyl (Pauli) expansion of dense operators.

Every M in M_N(C), N = 2^m, is uniquely M = Σ_c α_c E(c) with
α_c = Tr(E(c)† M) / N. The support of M is the set of points c with α_c != 0.

Key components:
1. Dense matrix helpers: num_qubits, is_unitary, projectively_equal.
2. WeylExpansion with expand / synthesize.
3. Support queries: support, support_is_coset, translate_support and
   support_invariant_under.
4. as_phased_pauli / conjugate: recognise λ·E(c) from its permutation
   structure without a full expansion.
"""
from __future__ import annotations

import logging
from typing import Dict, Iterable, Iterator, List, Literal, NamedTuple, Optional, Set, Tuple

import numpy as np

from config import DEFAULT_MAX_QUBITS, DEFAULT_TOLERANCE
from errors import NotClifford
from gf2 import BitMatrix, BitVector
from pauli import PhasedPauli, parity, to_dense

logger = logging.getLogger(__name__)

_I_POWERS = np.array([1, 1j, -1, -1j])


def num_qubits(M: np.ndarray) -> int:
    """
    Number of qubits m of a 2^m x 2^m matrix.

    Raises:
        ValueError: If M is not square or its dimension is not a power of two >= 2.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    n = M.shape[0]
    if n < 2 or n & (n - 1):
        raise ValueError(f"dimension {n} is not a power of two")
    return n.bit_length() - 1


def is_unitary(M: np.ndarray, tol: float = DEFAULT_TOLERANCE) -> bool:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    deviation = np.abs(M.conj().T @ M - np.eye(M.shape[0])).max()
    return bool(deviation <= tol)


def projectively_equal(U: np.ndarray, V: np.ndarray, tol: float = DEFAULT_TOLERANCE) -> bool:
    """Whether unitaries U and V agree up to a global phase: |Tr(U†V)| = N."""
    U, V = np.asarray(U), np.asarray(V)
    if U.shape != V.shape:
        return False
    n = U.shape[0]
    return bool(abs(abs(np.trace(U.conj().T @ V)) - n) <= tol * n)


def _point(a: int, b: int, m: int) -> BitVector:
    return BitVector((a << m) | b, 2 * m)


class WeylExpansion:
    """
    Sparse Pauli coefficients of an operator on m qubits.

    Attributes:
        m (int): Number of qubits.
        coefficients (Dict[BitVector, complex]): Nonzero α_c keyed by the (a|b) point c.
    """

    def __init__(self, m: int, coefficients: Dict[BitVector, complex]) -> None:
        for point in coefficients:
            if len(point) != 2 * m:
                raise ValueError(f"point {point} does not have length {2 * m}")
        self.m = m
        self.coefficients = dict(coefficients)

    def support(self) -> Set[BitVector]:
        return set(self.coefficients)

    def points(self) -> List[BitVector]:
        """Support points sorted by (a|b)."""
        return sorted(self.coefficients)

    def items(self) -> List[Tuple[BitVector, complex]]:
        return [(point, self.coefficients[point]) for point in self.points()]

    def coefficient(self, point: BitVector) -> complex:
        return self.coefficients.get(point, 0j)

    def norm_squared(self) -> float:
        """Σ |α_c|², which equals Tr(M†M)/N by Parseval."""
        return float(sum(abs(value) ** 2 for value in self.coefficients.values()))

    def __len__(self) -> int:
        return len(self.coefficients)

    def __iter__(self) -> Iterator[BitVector]:
        return iter(self.points())

    def __repr__(self) -> str:
        return f"WeylExpansion(m={self.m}, terms={len(self)})"


def expand(M: np.ndarray, tol: float = DEFAULT_TOLERANCE, max_qubits: int = DEFAULT_MAX_QUBITS) -> WeylExpansion:
    """
    Expand M in the Pauli basis.

    For fixed a, the traces Tr(D(a,b)† M) over all b are a Walsh-Hadamard transform
    of the permuted diagonal f_a(v) = M[v+a, v], so the whole grid is one matrix
    product with the ±1 character table.

    Args:
        M (np.ndarray): A 2^m x 2^m complex matrix.
        tol (float): Coefficients with modulus at or below tol are dropped.
        max_qubits (int): Refuse larger matrices.

    Returns:
        WeylExpansion: The nonzero coefficients.
    """
    M = np.asarray(M, dtype=complex)
    m = num_qubits(M)
    if m > max_qubits:
        raise ValueError(f"m={m} exceeds the configured maximum of {max_qubits} qubits")
    n = 1 << m
    idx = np.arange(n)
    shifted = M[idx[:, None] ^ idx[None, :], idx[None, :]]
    characters = 1 - 2 * parity(idx[:, None] & idx[None, :])
    traces = shifted @ characters.T
    overlap = np.bitwise_count(idx[:, None] & idx[None, :]) % 4
    alpha = np.conj(_I_POWERS[overlap]) * traces / n

    coefficients: Dict[BitVector, complex] = {}
    for a, b in zip(*np.nonzero(np.abs(alpha) > tol)):
        coefficients[_point(int(a), int(b), m)] = complex(alpha[a, b])
    logger.debug("expanded m=%d operator into %d terms", m, len(coefficients))
    return WeylExpansion(m, coefficients)


def synthesize(W: WeylExpansion, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    """Σ α_c E(c) as a dense matrix."""
    if W.m > max_qubits:
        raise ValueError(f"m={W.m} exceeds the configured maximum of {max_qubits} qubits")
    n = 1 << W.m
    result = np.zeros((n, n), dtype=complex)
    for point, value in W.coefficients.items():
        result += value * to_dense(PhasedPauli.from_point(point), max_qubits=max_qubits)
    return result


def support(W: WeylExpansion) -> Set[BitVector]:
    return W.support()


class SupportShape(NamedTuple):
    """
    Classification of a support set.

    kind is "group" when the set is a subspace, "coset" when it is offset + base with
    offset outside base, "neither" otherwise. base is a row basis of the subspace and
    offset the least element of the coset; both are None for "neither".
    """

    kind: Literal["group", "coset", "neither"]
    base: Optional[BitMatrix]
    offset: Optional[BitVector]

    def points(self) -> List[BitVector]:
        if self.base is None:
            return []
        shift = self.offset if self.offset is not None else BitVector.zeros(self.base.ncols)
        return sorted(shift ^ x for x in self.base.span())


def classify_points(points: Iterable[BitVector]) -> SupportShape:
    """Decide whether a nonempty point set is a subgroup, a proper coset, or neither."""
    points = set(points)
    if not points:
        return SupportShape("neither", None, None)
    offset = min(points)
    translated = {p ^ offset for p in points}
    base = BitMatrix.from_rows(sorted(translated)).row_basis()
    if len(translated) != 1 << base.nrows or set(base.span()) != translated:
        return SupportShape("neither", None, None)
    if offset.is_zero():
        return SupportShape("group", base, None)
    return SupportShape("coset", base, offset)


def support_is_coset(W: WeylExpansion) -> SupportShape:
    return classify_points(W.support())


def translate_support(W: WeylExpansion, x: BitVector) -> Set[BitVector]:
    """{x} + supp(W), which is the support of M·D(x)."""
    if len(x) != 2 * W.m:
        raise ValueError(f"translation {x} does not have length {2 * W.m}")
    return {p ^ x for p in W.support()}


def support_invariant_under(W: WeylExpansion, F: BitMatrix) -> bool:
    """Whether c in supp(W) implies cF in supp(W)."""
    points = W.support()
    return all(p @ F in points for p in points)


def random_expansion(m: int, size: int, rng: np.random.Generator) -> WeylExpansion:
    """Up to size random points with complex Gaussian coefficients."""
    codes = rng.choice(1 << (2 * m), size=min(size, 1 << (2 * m)), replace=False)
    values = rng.normal(size=len(codes)) + 1j * rng.normal(size=len(codes))
    return WeylExpansion(m, {BitVector(int(c), 2 * m): complex(v) for c, v in zip(codes, values)})


def pauli_candidate(M: np.ndarray, tol: float = DEFAULT_TOLERANCE) -> Optional[Tuple[BitVector, complex]]:
    """
    Return (c, λ) with M = λ·E(c), or None.

    The column of |0⟩ gives a and λ·i^{a·b}; the columns of the unit vectors give
    the signs (-1)^{b_j}. The guess is confirmed against the full matrix.
    """
    M = np.asarray(M, dtype=complex)
    m = num_qubits(M)
    a = int(np.argmax(np.abs(M[:, 0])))
    lead = M[a, 0]
    if abs(lead) <= tol:
        return None
    b = 0
    for j in range(m):
        e = 1 << (m - 1 - j)
        if (M[e ^ a, e] / lead).real < 0:
            b |= e
    scalar = lead / _I_POWERS[(a & b).bit_count() % 4]
    point = _point(a, b, m)
    candidate = scalar * to_dense(PhasedPauli.from_point(point), max_qubits=m)
    if np.abs(candidate - M).max() > tol:
        return None
    return point, complex(scalar)


def as_phased_pauli(M: np.ndarray, tol: float = DEFAULT_TOLERANCE) -> Optional[PhasedPauli]:
    """
    Identify M as e^{iπt/4} E(c); None if M is not of that form.

    This inverts PhasedPauli.to_dense.
    """
    found = pauli_candidate(M, tol)
    if found is None:
        return None
    point, scalar = found
    if abs(abs(scalar) - 1) > tol:
        return None
    turns = np.angle(scalar) / (np.pi / 4)
    t = int(np.rint(turns))
    if abs(turns - t) * np.pi / 4 > tol:
        return None
    return PhasedPauli.from_point(point, t)


def conjugate(U: np.ndarray, p: PhasedPauli, tol: float = DEFAULT_TOLERANCE) -> PhasedPauli:
    """
    U p U† as a phased Pauli.

    Raises:
        NotClifford: If the conjugate is not a phased Pauli.
    """
    U = np.asarray(U, dtype=complex)
    image = U @ p.to_dense(max_qubits=num_qubits(U)) @ U.conj().T
    result = as_phased_pauli(image, tol)
    if result is None:
        raise NotClifford(f"conjugate of {p} is not a phased Pauli")
    return result
