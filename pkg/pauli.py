"""
Exact Heisenberg-Weyl arithmetic with phase tracking.

A PhasedPauli is e^{iπt/4} E(a, b) with t in Z8 and E(a, b) = i^{a·b} D(a, b),
where D(a, b)|v⟩ = (-1)^{b·v} |v + a⟩. Single-qubit letters are X = (1,0),
Z = (0,1) and Y = (1,1), and E(1,1) is exactly the Y matrix.

Basis states |v⟩ are indexed by the integer whose most significant bit is v_1,
so qubit 1 is the leftmost tensor factor.

Key components:
1. PhasedPauli with the exact product rule and Pauli-string I/O.
2. StabilizerGroup: independent, commuting Hermitian generators without -I.
3. Projectors onto signed stabilizer codespaces and MCS enumeration.
"""
from __future__ import annotations

import re
import logging
from typing import Dict, Iterator, List, Optional, Sequence

import numpy as np

from config import DEFAULT_MAX_QUBITS
from errors import FormatError
from gf2 import BitMatrix, BitVector, dual_space, symplectic_inner

logger = logging.getLogger(__name__)

_LETTERS: Dict[str, tuple] = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_PREFIX_PHASE: Dict[str, int] = {"": 0, "+": 0, "-": 4, "i": 2, "+i": 2, "-i": 6}
_PHASE_PREFIX: Dict[int, str] = {0: "", 4: "-", 2: "i", 6: "-i"}
_PAULI_PATTERN = re.compile(r"^(?:w\^(?P<t>\d+)|(?P<sign>[+-]?i|[+-])?)(?P<body>[IXYZ]+)$")
_I_POWERS = np.array([1, 1j, -1, -1j])


def _check_qubits(m: int, max_qubits: int) -> None:
    if m > max_qubits:
        raise ValueError(f"dense matrices for m={m} exceed the configured maximum of {max_qubits} qubits")


def parity(values: np.ndarray) -> np.ndarray:
    """Bitwise parity of each nonnegative integer entry, as a signed int64 array."""
    # bitwise_count yields uint8; callers compute 1 - 2 * parity.
    return (np.bitwise_count(values) & 1).astype(np.int64)


class PhasedPauli:
    """The operator e^{iπ·phase/4} E(a, b) on m qubits."""

    __slots__ = ("_a", "_b", "_phase")

    def __init__(self, a: BitVector, b: BitVector, phase: int = 0) -> None:
        if len(a) != len(b):
            raise ValueError(f"a and b must have equal length, got {len(a)} and {len(b)}")
        self._a = a
        self._b = b
        self._phase = int(phase) % 8

    @classmethod
    def from_point(cls, point: BitVector, phase: int = 0) -> PhasedPauli:
        a, b = point.halves()
        return cls(a, b, phase)

    @classmethod
    def identity(cls, m: int) -> PhasedPauli:
        return cls(BitVector.zeros(m), BitVector.zeros(m))

    @classmethod
    def from_string(cls, text: str) -> PhasedPauli:
        """Parse strings such as 'XZ', '-iYI' or 'w^3ZZ' (qubit 1 leftmost)."""
        match = _PAULI_PATTERN.match(text.strip())
        if match is None:
            raise FormatError(f"'{text}' is not a Pauli string")
        if match.group("t") is not None:
            phase = int(match.group("t"))
        else:
            phase = _PREFIX_PHASE[match.group("sign") or ""]
        body = match.group("body")
        a = BitVector.from_bits(_LETTERS[ch][0] for ch in body)
        b = BitVector.from_bits(_LETTERS[ch][1] for ch in body)
        return cls(a, b, phase)

    @property
    def a(self) -> BitVector:
        return self._a

    @property
    def b(self) -> BitVector:
        return self._b

    @property
    def phase(self) -> int:
        return self._phase

    @property
    def m(self) -> int:
        return len(self._a)

    @property
    def point(self) -> BitVector:
        return BitVector.concat(self._a, self._b)

    def is_hermitian(self) -> bool:
        return self._phase in (0, 4)

    def inverse(self) -> PhasedPauli:
        return PhasedPauli(self._a, self._b, -self._phase)

    def scaled(self, phase: int) -> PhasedPauli:
        """Multiply by e^{iπ·phase/4}."""
        return PhasedPauli(self._a, self._b, self._phase + phase)

    def letters(self) -> str:
        table = {bits: letter for letter, bits in _LETTERS.items()}
        return "".join(table[(x, z)] for x, z in zip(self._a, self._b))

    def to_dense(self, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
        return to_dense(self, max_qubits=max_qubits)

    def __mul__(self, other: PhasedPauli) -> PhasedPauli:
        return mul(self, other)

    def __neg__(self) -> PhasedPauli:
        return self.scaled(4)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PhasedPauli):
            return NotImplemented
        return (self._a, self._b, self._phase) == (other._a, other._b, other._phase)

    def __hash__(self) -> int:
        return hash((self._a, self._b, self._phase))

    def __str__(self) -> str:
        prefix = _PHASE_PREFIX.get(self._phase, f"w^{self._phase}")
        return prefix + self.letters()

    def __repr__(self) -> str:
        return f"PhasedPauli('{self}')"


def _check_same_m(p: PhasedPauli, q: PhasedPauli) -> None:
    if p.m != q.m:
        raise ValueError(f"qubit count mismatch: {p.m} vs {q.m}")


def mul(p: PhasedPauli, q: PhasedPauli) -> PhasedPauli:
    """
    Exact product p·q.

    E(a,b)E(c,d) = i^{a·b + c·d + 2 b·c - (a+c)·(b+d)} E(a+c, b+d), where the dot
    products count overlapping ones as integers and a+c, b+d are taken mod 2.
    """
    _check_same_m(p, q)
    a, b, c, d = p.a.value, p.b.value, q.a.value, q.b.value
    x, z = a ^ c, b ^ d
    quarter_turns = (a & b).bit_count() + (c & d).bit_count() + 2 * (b & c).bit_count() - (x & z).bit_count()
    length = p.m
    return PhasedPauli(BitVector(x, length), BitVector(z, length), p.phase + q.phase + 2 * quarter_turns)


def commutes(p: PhasedPauli, q: PhasedPauli) -> bool:
    _check_same_m(p, q)
    return symplectic_inner(p.point, q.point) == 0


def commutation_matrix(paulis: Sequence[PhasedPauli]) -> np.ndarray:
    """Pairwise symplectic inner products as a 0/1 matrix."""
    points = [p.point for p in paulis]
    return np.array([[symplectic_inner(u, v) for v in points] for u in points], dtype=np.uint8).reshape(
        len(points), len(points)
    )


def to_dense(p: PhasedPauli, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    """The 2^m x 2^m matrix of p."""
    _check_qubits(p.m, max_qubits)
    size = 1 << p.m
    basis = np.arange(size)
    signs = 1 - 2 * parity(basis & p.b.value)
    matrix = np.zeros((size, size), dtype=complex)
    matrix[basis ^ p.a.value, basis] = signs
    scalar = _I_POWERS[(p.a.value & p.b.value).bit_count() % 4] * np.exp(1j * np.pi * p.phase / 4)
    return scalar * matrix


class StabilizerGroup:
    """
    An abelian subgroup of the Pauli group generated by Hermitian elements.

    Generators must be pairwise commuting and independent; the generated group
    never contains -I.
    """

    def __init__(self, generators: Sequence[PhasedPauli], m: Optional[int] = None) -> None:
        generators = list(generators)
        if not generators and m is None:
            raise ValueError("m is required for an empty stabilizer group")
        self._m = generators[0].m if generators else int(m)
        for g in generators:
            if g.m != self._m:
                raise ValueError(f"generator {g} acts on {g.m} qubits, expected {self._m}")
            if not g.is_hermitian():
                raise ValueError(f"generator {g} is not Hermitian")
        for i, g in enumerate(generators):
            for h in generators[i + 1:]:
                if not commutes(g, h):
                    raise ValueError(f"generators {g} and {h} anticommute")
        self._generators = tuple(generators)
        for element in self._products(self._generators)[1:]:
            if element.point.is_zero():
                if element.phase == 4:
                    raise ValueError("the generated group contains -I")
                raise ValueError("generators are not independent")

    @classmethod
    def from_strings(cls, lines: Sequence[str]) -> StabilizerGroup:
        return cls([PhasedPauli.from_string(line) for line in lines])

    @classmethod
    def z_group(cls, m: int) -> StabilizerGroup:
        """Z_N, generated by Z on each qubit."""
        return cls([PhasedPauli(BitVector.zeros(m), BitVector.unit(i, m)) for i in range(m)])

    @staticmethod
    def _products(generators: Sequence[PhasedPauli]) -> List[PhasedPauli]:
        m = generators[0].m if generators else 0
        elements = [PhasedPauli.identity(m)] if generators else []
        for g in generators:
            elements += [e * g for e in elements]
        return elements

    @property
    def generators(self) -> tuple:
        return self._generators

    @property
    def m(self) -> int:
        return self._m

    @property
    def k(self) -> int:
        return len(self._generators)

    def generator_matrix(self) -> BitMatrix:
        return BitMatrix.from_rows([g.point for g in self._generators], ncols=2 * self._m)

    def points(self) -> List[BitVector]:
        """The (a|b) points of all group elements, sorted."""
        return self.generator_matrix().span()

    def signed(self, d: BitVector) -> StabilizerGroup:
        """S_d: generator n is negated when d_n = 1."""
        if len(d) != self.k:
            raise ValueError(f"sign vector has length {len(d)}, expected {self.k}")
        return StabilizerGroup([-g if bit else g for g, bit in zip(self._generators, d)], m=self._m)

    def __str__(self) -> str:
        return "\n".join(str(g) for g in self._generators)

    def __repr__(self) -> str:
        return f"StabilizerGroup({[str(g) for g in self._generators]})"


def stabilizer_elements(S: StabilizerGroup, d: Optional[BitVector] = None) -> List[PhasedPauli]:
    """All 2^k elements of S_d."""
    group = S if d is None else S.signed(d)
    if not group.k:
        return [PhasedPauli.identity(group.m)]
    return StabilizerGroup._products(group.generators)


def projector(S: StabilizerGroup, d: Optional[BitVector] = None, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    """Π_d = ∏ (I + (-1)^{d_n} E_n) / 2."""
    _check_qubits(S.m, max_qubits)
    group = S if d is None else S.signed(d)
    eye = np.eye(1 << S.m, dtype=complex)
    result = eye.copy()
    for g in group.generators:
        result = result @ (eye + g.to_dense(max_qubits)) / 2
    return result


def is_mcs(S: StabilizerGroup) -> bool:
    return S.k > 0 and S.generator_matrix().rank() == S.m


def enumerate_mcs(m: int) -> Iterator[StabilizerGroup]:
    """
    Every maximal commutative subgroup of the m-qubit Pauli group with + signs.

    Maximal isotropic subspaces are grown one dimension at a time inside their
    symplectic duals and deduplicated by reduced row echelon basis. There are
    ∏_{i=1..m} (2^i + 1) of them.
    """
    if not 1 <= m <= 3:
        raise ValueError(f"MCS enumeration is supported for 1 <= m <= 3, got {m}")
    n = 2 * m
    layer = [BitMatrix.zeros(0, n)]
    for _ in range(m):
        grown: Dict[tuple, BitMatrix] = {}
        for basis in layer:
            inside = set(basis.span())
            for x in dual_space(basis).span():
                if x in inside:
                    continue
                extended = BitMatrix.vstack(basis, BitMatrix.from_rows([x])).row_basis()
                grown.setdefault(tuple(row.value for row in extended.rows), extended)
        layer = [grown[key] for key in sorted(grown)]
    logger.debug("enumerated %d maximal isotropic subspaces for m=%d", len(layer), m)
    for basis in layer:
        yield StabilizerGroup([PhasedPauli.from_point(row) for row in basis.rows])
