"""
Binary linear algebra and the binary symplectic group Sp(2m).

Key components:
1. BitVector: an immutable vector over F2 packed into a Python integer. The
   leftmost printed bit is the most significant one, so sorting by integer value
   is lexicographic order on the printed string.
2. BitMatrix: an immutable dense matrix over F2 backed by a read-only uint8
   numpy array, with elimination based helpers (rank, rref, kernels, solving).
3. SymplecticMatrix: a 2m x 2m BitMatrix satisfying F Ω F^t = Ω.
4. Free functions for the symplectic calculus: inner product, transvections,
   Fix/Res spaces, duals, the standard matrices F_D, F_U, F_Ω and the Bruhat
   and transvection decompositions.

Points of F2^{2m} are stored in (a | b) order; matrices act on row vectors from
the right, x -> xF.
"""
from __future__ import annotations

import logging
from typing import Iterable, Iterator, List, Literal, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from errors import InternalError, NotSymplectic

logger = logging.getLogger(__name__)


class BitVector:
    """
    Immutable vector over F2 of fixed length.

    The bits are packed into an integer: bit i (counting from the left) is
    (value >> (length - 1 - i)) & 1.
    """

    __slots__ = ("_value", "_length")

    def __init__(self, value: int, length: int) -> None:
        if length <= 0:
            raise ValueError(f"BitVector length must be positive, got {length}")
        if value < 0 or value >> length:
            raise ValueError(f"value {value} does not fit in {length} bits")
        self._value = int(value)
        self._length = int(length)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitVector:
        value = 0
        length = 0
        for bit in bits:
            value = (value << 1) | (int(bit) & 1)
            length += 1
        return cls(value, length)

    @classmethod
    def from_str(cls, text: str) -> BitVector:
        """Parse '0101' (a '|' separator between halves is allowed and ignored)."""
        cleaned = text.strip().replace("|", "")
        if not cleaned or set(cleaned) - {"0", "1"}:
            raise ValueError(f"'{text}' is not a bit string")
        return cls(int(cleaned, 2), len(cleaned))

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(0, length)

    @classmethod
    def unit(cls, index: int, length: int) -> BitVector:
        if not 0 <= index < length:
            raise ValueError(f"unit index {index} out of range for length {length}")
        return cls(1 << (length - 1 - index), length)

    @classmethod
    def concat(cls, left: BitVector, right: BitVector) -> BitVector:
        return cls((left.value << len(right)) | right.value, len(left) + len(right))

    @property
    def value(self) -> int:
        return self._value

    @property
    def bits(self) -> np.ndarray:
        shifts = np.arange(self._length - 1, -1, -1, dtype=np.int64)
        if self._length <= 62:
            return ((self._value >> shifts) & 1).astype(np.uint8)
        return np.array([(self._value >> int(s)) & 1 for s in shifts], dtype=np.uint8)

    def to_int(self) -> int:
        return self._value

    def halves(self) -> Tuple[BitVector, BitVector]:
        """Split (a | b) into a and b."""
        if self._length % 2:
            raise ValueError(f"cannot split odd length {self._length}")
        m = self._length // 2
        return BitVector(self._value >> m, m), BitVector(self._value & ((1 << m) - 1), m)

    def weight(self) -> int:
        return self._value.bit_count()

    def is_zero(self) -> bool:
        return self._value == 0

    def dot(self, other: BitVector) -> int:
        """Euclidean inner product over F2."""
        self._check_length(other)
        return (self._value & other._value).bit_count() & 1

    def _check_length(self, other: BitVector) -> None:
        if self._length != other._length:
            raise ValueError(f"length mismatch: {self._length} vs {other._length}")

    def __xor__(self, other: BitVector) -> BitVector:
        self._check_length(other)
        return BitVector(self._value ^ other._value, self._length)

    __add__ = __xor__

    def __getitem__(self, index: int) -> int:
        if index < 0:
            index += self._length
        if not 0 <= index < self._length:
            raise IndexError(index)
        return (self._value >> (self._length - 1 - index)) & 1

    def __iter__(self) -> Iterator[int]:
        return (self[i] for i in range(self._length))

    def __len__(self) -> int:
        return self._length

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self._length == other._length and self._value == other._value

    def __lt__(self, other: BitVector) -> bool:
        return (self._length, self._value) < (other._length, other._value)

    def __hash__(self) -> int:
        return hash((self._length, self._value))

    def __str__(self) -> str:
        return format(self._value, f"0{self._length}b")

    def __repr__(self) -> str:
        return f"BitVector('{self}')"


MatrixLike = Union["BitMatrix", np.ndarray, Sequence[Sequence[int]]]


class BitMatrix:
    """
    Immutable dense matrix over F2.

    Row-vector convention: a BitVector x times a matrix M is written x @ M.
    """

    __slots__ = ("_data",)

    def __init__(self, rows: MatrixLike, ncols: Optional[int] = None) -> None:
        if isinstance(rows, BitMatrix):
            data = rows._data
        else:
            data = np.asarray(rows)
            if data.ndim < 2 and data.size == 0:
                data = np.zeros((0, ncols or 0), dtype=np.uint8)
            data = np.mod(data.astype(np.int64), 2).astype(np.uint8)
        if data.ndim != 2:
            raise ValueError(f"BitMatrix needs a 2-D array, got shape {data.shape}")
        data = np.array(data, dtype=np.uint8, copy=True)
        data.setflags(write=False)
        self._data = data

    @classmethod
    def from_rows(cls, rows: Sequence[BitVector], ncols: Optional[int] = None) -> BitMatrix:
        if not rows:
            if ncols is None:
                raise ValueError("ncols is required for an empty row list")
            return cls(np.zeros((0, ncols), dtype=np.uint8))
        return cls(np.stack([row.bits for row in rows]))

    @classmethod
    def from_strings(cls, lines: Sequence[str]) -> BitMatrix:
        return cls.from_rows([BitVector.from_str(line) for line in lines])

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> BitMatrix:
        return cls(np.zeros((nrows, ncols), dtype=np.uint8))

    @classmethod
    def block(cls, a: MatrixLike, b: MatrixLike, c: MatrixLike, d: MatrixLike) -> BitMatrix:
        blocks = [np.asarray(BitMatrix(x).data) for x in (a, b, c, d)]
        return cls(np.block([[blocks[0], blocks[1]], [blocks[2], blocks[3]]]))

    @classmethod
    def vstack(cls, *matrices: BitMatrix) -> BitMatrix:
        return cls(np.vstack([m.data for m in matrices]))

    @classmethod
    def hstack(cls, *matrices: BitMatrix) -> BitMatrix:
        return cls(np.hstack([m.data for m in matrices]))

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def shape(self) -> Tuple[int, int]:
        return self._data.shape

    @property
    def nrows(self) -> int:
        return self._data.shape[0]

    @property
    def ncols(self) -> int:
        return self._data.shape[1]

    @property
    def T(self) -> BitMatrix:
        return BitMatrix(self._data.T)

    @property
    def rows(self) -> List[BitVector]:
        return [BitVector.from_bits(row) for row in self._data]

    def row(self, index: int) -> BitVector:
        return BitVector.from_bits(self._data[index])

    def blocks(self) -> Tuple[BitMatrix, BitMatrix, BitMatrix, BitMatrix]:
        """Return the four m x m blocks A, B, C, D of a 2m x 2m matrix."""
        n = self.nrows
        if n != self.ncols or n % 2:
            raise ValueError(f"blocks() needs an even square matrix, got {self.shape}")
        m = n // 2
        d = self._data
        return BitMatrix(d[:m, :m]), BitMatrix(d[:m, m:]), BitMatrix(d[m:, :m]), BitMatrix(d[m:, m:])

    def rref(self) -> Tuple[BitMatrix, BitMatrix, List[int]]:
        """
        Reduced row echelon form with the left transform.

        Returns:
            Tuple[BitMatrix, BitMatrix, List[int]]: (E, L, pivots) with L @ self = E,
            L invertible, and pivots the pivot columns of the first len(pivots) rows.
        """
        work = self._data.copy()
        nrows, ncols = work.shape
        left = np.eye(nrows, dtype=np.uint8)
        pivots: List[int] = []
        row = 0
        for col in range(ncols):
            if row == nrows:
                break
            candidates = np.nonzero(work[row:, col])[0]
            if candidates.size == 0:
                continue
            pivot = row + int(candidates[0])
            if pivot != row:
                work[[row, pivot]] = work[[pivot, row]]
                left[[row, pivot]] = left[[pivot, row]]
            mask = work[:, col].astype(bool)
            mask[row] = False
            work[mask] ^= work[row]
            left[mask] ^= left[row]
            pivots.append(col)
            row += 1
        return BitMatrix(work), BitMatrix(left), pivots

    def rank(self) -> int:
        return len(self.rref()[2])

    def row_basis(self) -> BitMatrix:
        """Canonical basis of the row space: the nonzero rows of the rref."""
        reduced, _, pivots = self.rref()
        return BitMatrix(reduced.data[: len(pivots)], ncols=self.ncols)

    def left_kernel(self) -> BitMatrix:
        """Basis of {x : x @ self = 0}."""
        _, left, pivots = self.rref()
        return BitMatrix(left.data[len(pivots):], ncols=self.nrows)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def inverse(self) -> BitMatrix:
        if self.nrows != self.ncols:
            raise ValueError(f"cannot invert non-square matrix of shape {self.shape}")
        _, left, pivots = self.rref()
        if len(pivots) != self.nrows:
            raise ValueError("matrix is singular over F2")
        return left

    def solve(self, target: BitVector) -> Optional[BitVector]:
        """Return some x with x @ self = target, or None if target is not in the row space."""
        if len(target) != self.ncols:
            raise ValueError(f"target length {len(target)} does not match {self.ncols} columns")
        reduced, left, pivots = self.rref()
        remainder = target.bits.copy()
        coefficients = np.zeros(self.nrows, dtype=np.uint8)
        for i, col in enumerate(pivots):
            if remainder[col]:
                remainder ^= reduced.data[i]
                coefficients[i] = 1
        if remainder.any() or self.nrows == 0:
            return None
        solution = (coefficients.astype(np.int64) @ left.data.astype(np.int64)) % 2
        return BitVector.from_bits(solution)

    def contains(self, vector: BitVector) -> bool:
        """Row-space membership."""
        if vector.is_zero():
            return True
        return self.solve(vector) is not None

    def span(self) -> List[BitVector]:
        """All elements of the row space, sorted. Exponential in the rank."""
        basis = self.row_basis().rows
        elements = [BitVector.zeros(self.ncols)]
        for vector in basis:
            elements += [e ^ vector for e in elements]
        return sorted(elements)

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and bool(np.array_equal(self._data, self._data.T))

    def is_zero(self) -> bool:
        return not self._data.any()

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return BitMatrix((self._data.astype(np.int64) @ other._data.astype(np.int64)) % 2)

    def __rmatmul__(self, vector: BitVector) -> BitVector:
        if not isinstance(vector, BitVector):
            return NotImplemented
        if len(vector) != self.nrows:
            raise ValueError(f"vector length {len(vector)} does not match {self.nrows} rows")
        product = (vector.bits.astype(np.int64) @ self._data.astype(np.int64)) % 2
        return BitVector.from_bits(product)

    def __add__(self, other: BitMatrix) -> BitMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return BitMatrix(self._data ^ other._data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    def __hash__(self) -> int:
        return hash((self.shape, self._data.tobytes()))

    def __str__(self) -> str:
        return "\n".join("".join(str(int(x)) for x in row) for row in self._data)

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self.ncols})"


def omega(m: int) -> BitMatrix:
    """The 2m x 2m form matrix with identity blocks off the diagonal."""
    zero = np.zeros((m, m), dtype=np.uint8)
    eye = np.eye(m, dtype=np.uint8)
    return BitMatrix(np.block([[zero, eye], [eye, zero]]))


def is_symplectic(matrix: BitMatrix) -> bool:
    n = matrix.nrows
    if n != matrix.ncols or n == 0 or n % 2:
        return False
    form = omega(n // 2)
    return matrix @ form @ matrix.T == form


class SymplecticMatrix(BitMatrix):
    """A 2m x 2m BitMatrix preserving the symplectic form."""

    __slots__ = ()

    def __init__(self, rows: MatrixLike, check: bool = True) -> None:
        super().__init__(rows)
        if check and not is_symplectic(self):
            raise NotSymplectic(f"matrix of shape {self.shape} does not satisfy F Ω F^t = Ω")

    @classmethod
    def identity(cls, n: int) -> SymplecticMatrix:
        return cls(np.eye(n, dtype=np.uint8), check=False)

    @property
    def m(self) -> int:
        return self.nrows // 2

    def inverse(self) -> SymplecticMatrix:
        form = omega(self.m)
        return SymplecticMatrix(form @ self.T @ form, check=False)

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        product = BitMatrix.__matmul__(self, other)
        if isinstance(other, SymplecticMatrix):
            return SymplecticMatrix(product, check=False)
        return product

    def __repr__(self) -> str:
        return f"SymplecticMatrix(m={self.m})"


def _swap_halves(vector: BitVector) -> BitVector:
    a, b = vector.halves()
    return BitVector.concat(b, a)


def symplectic_inner(u: BitVector, v: BitVector) -> int:
    """⟨(a,b),(c,d)⟩ = a·d + b·c over F2."""
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    if len(u) % 2:
        raise ValueError(f"symplectic vectors need even length, got {len(u)}")
    m = len(u) // 2
    mask = (1 << m) - 1
    a, b = u.value >> m, u.value & mask
    c, d = v.value >> m, v.value & mask
    return ((a & d).bit_count() + (b & c).bit_count()) & 1


def transvection(v: BitVector) -> SymplecticMatrix:
    """T_v = I + Ω v^t v, acting as x -> x + ⟨v,x⟩ v."""
    if len(v) % 2:
        raise ValueError(f"symplectic vectors need even length, got {len(v)}")
    if v.is_zero():
        logger.warning("zero transvection vector requested; returning the identity")
    outer = np.outer(_swap_halves(v).bits, v.bits)
    return SymplecticMatrix(np.eye(len(v), dtype=np.uint8) ^ outer, check=False)


def apply_transvection(h: BitVector, x: BitVector) -> BitVector:
    return x ^ h if symplectic_inner(h, x) else x


def fix_space(F: SymplecticMatrix) -> BitMatrix:
    """Basis of Fix(F) = {x : x(I + F) = 0}."""
    return (BitMatrix.identity(F.nrows) + F).left_kernel()


def res_space(F: SymplecticMatrix) -> BitMatrix:
    """Basis of Res(F), the row space of I + F."""
    return (BitMatrix.identity(F.nrows) + F).row_basis()


def is_involution(F: BitMatrix) -> bool:
    return F @ F == BitMatrix.identity(F.nrows)


def is_hyperbolic(F: SymplecticMatrix) -> bool:
    """
    Whether the involution F satisfies ⟨v, vF⟩ = 0 for every v.

    For an involution q(v) = ⟨v, vF⟩ is additive: the cross terms of q(u + v) are
    ⟨u, vF⟩ + ⟨v, uF⟩, and ⟨v, uF⟩ = ⟨vF, uF²⟩ = ⟨vF, u⟩ = ⟨u, vF⟩, so they cancel.
    Checking the standard basis is therefore enough.

    Raises:
        ValueError: If F is not an involution.
    """
    if not is_involution(F):
        raise ValueError("is_hyperbolic is only defined for involutions")
    n = F.nrows
    return all(symplectic_inner(BitVector.unit(i, n), F.row(i)) == 0 for i in range(n))


def dual_space(V: BitMatrix, form: Literal["symplectic", "euclidean"] = "symplectic") -> BitMatrix:
    """Basis of the orthogonal complement of the row space of V."""
    if form == "symplectic":
        if V.ncols % 2:
            raise ValueError(f"symplectic dual needs even width, got {V.ncols}")
        pairing = omega(V.ncols // 2) @ V.T
    elif form == "euclidean":
        pairing = V.T
    else:
        raise ValueError(f"unknown form '{form}'")
    return pairing.left_kernel()


def f_d(P: BitMatrix) -> SymplecticMatrix:
    """F_D(P) = diag(P, P^{-t})."""
    if not P.is_invertible():
        raise ValueError("F_D needs an invertible P")
    m = P.nrows
    return SymplecticMatrix(BitMatrix.block(P, np.zeros((m, m)), np.zeros((m, m)), P.inverse().T), check=False)


def f_u(S: BitMatrix) -> SymplecticMatrix:
    """F_U(S) = [[I, S], [0, I]]."""
    if not S.is_symmetric():
        raise ValueError("F_U needs a symmetric S")
    m = S.nrows
    return SymplecticMatrix(BitMatrix.block(np.eye(m), S, np.zeros((m, m)), np.eye(m)), check=False)


def _partial_identity(r: int, m: int) -> np.ndarray:
    diag = np.zeros(m, dtype=np.uint8)
    diag[:r] = 1
    return np.diag(diag)


def f_omega(r: int, m: int) -> SymplecticMatrix:
    """F_Ω(r): swaps a_i and b_i for the first r qubits."""
    if not 0 <= r <= m:
        raise ValueError(f"r must lie in [0, {m}], got {r}")
    head = _partial_identity(r, m)
    tail = np.eye(m, dtype=np.uint8) ^ head
    return SymplecticMatrix(BitMatrix.block(tail, head, head, tail), check=False)


class BruhatDecomposition(NamedTuple):
    """F = F_D(p1) F_U(s1) F_Ω(rank) F_U(s2) F_D(p2)."""

    p1: BitMatrix
    s1: BitMatrix
    rank: int
    s2: BitMatrix
    p2: BitMatrix

    def recompose(self) -> SymplecticMatrix:
        m = self.p1.nrows
        return f_d(self.p1) @ f_u(self.s1) @ f_omega(self.rank, m) @ f_u(self.s2) @ f_d(self.p2)


def bruhat_decompose(F: SymplecticMatrix) -> BruhatDecomposition:
    """
    Bruhat decomposition by elimination on the lower-left block C.

    P1 = L^t where L row-reduces C, P2 stacks the rref rows of C over unit rows for
    the non-pivot columns, so the remaining middle factor has lower-left block
    I_{m|r}. A block-diagonal correction of P2 normalizes the trailing identity,
    S2 is read off the lower-right block and S1 off what remains.
    """
    m = F.m
    _, _, lower_left, _ = F.blocks()
    reduced, left, pivots = lower_left.rref()
    r = len(pivots)

    p1 = left.T
    rows = [reduced.data[i] for i in range(r)]
    eye = np.eye(m, dtype=np.uint8)
    rows += [eye[j] for j in range(m) if j not in pivots]
    p2 = BitMatrix(np.array(rows, dtype=np.uint8).reshape(m, m))

    middle = f_d(p1).inverse() @ F @ f_d(p2).inverse()
    if r < m:
        trailing = BitMatrix(middle.blocks()[3].data[r:, r:])
        correction = np.eye(m, dtype=np.uint8)
        correction[r:, r:] = trailing.inverse().T.data
        correction_matrix = BitMatrix(correction)
        p2 = correction_matrix @ p2
        middle = middle @ f_d(correction_matrix).inverse()

    lower_right = middle.blocks()[3].data
    s2 = np.zeros((m, m), dtype=np.uint8)
    s2[:r, :] = lower_right[:r, :]
    s2[r:, :r] = lower_right[:r, r:].T
    s2_matrix = BitMatrix(s2)

    upper = middle @ f_u(s2_matrix) @ f_omega(r, m)
    s1_matrix = upper.blocks()[1]

    decomposition = BruhatDecomposition(p1, s1_matrix, r, s2_matrix, p2)
    if decomposition.recompose() != F:
        raise InternalError("Bruhat factors do not recompose to the input")
    logger.debug("bruhat cell r=%d for m=%d", r, m)
    return decomposition


def _bridge(x: BitVector, y: BitVector, fixed: Sequence[BitVector]) -> BitVector:
    """Find w with ⟨w,x⟩ = ⟨w,y⟩ = 1 and ⟨w,a⟩ = ⟨x,a⟩ for every a in fixed."""
    constraints = [x, y, *fixed]
    pairing = BitMatrix(np.stack([_swap_halves(c).bits for c in constraints], axis=1))
    target = BitVector.from_bits([1, 1] + [symplectic_inner(x, a) for a in fixed])
    w = pairing.solve(target)
    if w is None:
        raise ValueError(f"no transvection route from {x} to {y} fixing {len(fixed)} vectors")
    return w


def map_vector(x: BitVector, y: BitVector, fixed: Sequence[BitVector] = ()) -> List[BitVector]:
    """
    At most two transvection vectors h_1, h_2 with x T_{h_1} T_{h_2} = y.

    Every returned h satisfies ⟨h, a⟩ = 0 for a in fixed, so the transvections leave
    those vectors alone. Requires ⟨x, a⟩ = ⟨y, a⟩ for each a in fixed.
    """
    if x == y:
        return []
    if x.is_zero() or y.is_zero():
        raise ValueError("a symplectic map cannot send a nonzero vector to zero or back")
    for a in fixed:
        if symplectic_inner(x, a) != symplectic_inner(y, a):
            raise ValueError(f"{x} and {y} pair differently with fixed vector {a}")
    if symplectic_inner(x, y):
        return [x ^ y]
    w = _bridge(x, y, fixed)
    return [x ^ w, w ^ y]


def _split_symmetric(q: np.ndarray) -> Tuple[List[np.ndarray], List[Tuple[np.ndarray, np.ndarray]]]:
    """Write symmetric q as a sum of terms s^t s and x^t y + y^t x, each step lowering the rank."""
    q = q.copy()
    singles: List[np.ndarray] = []
    pairs: List[Tuple[np.ndarray, np.ndarray]] = []
    while q.any():
        diagonal = np.nonzero(np.diag(q))[0]
        if diagonal.size:
            v = q[int(diagonal[0])].copy()
            singles.append(v)
            q ^= np.outer(v, v)
        else:
            i, j = np.argwhere(q)[0]
            x, y = q[i].copy(), q[j].copy()
            pairs.append((x, y))
            q ^= np.outer(x, y) ^ np.outer(y, x)
    return singles, pairs


def _rank_one_terms(q: np.ndarray) -> List[np.ndarray]:
    """Write a non-alternating symmetric q as exactly rank(q) terms v^t v."""
    singles, pairs = _split_symmetric(q)
    if pairs and not singles:
        raise InternalError("alternating form has no diagonal decomposition")
    terms = singles[:-1]
    carry = singles[-1] if singles else None
    for x, y in pairs:
        # v^t v + x^t y + y^t x = (v+x)^t(v+x) + (v+y)^t(v+y) + (v+x+y)^t(v+x+y)
        terms += [carry ^ x, carry ^ y]
        carry = carry ^ x ^ y
    if carry is not None:
        terms.append(carry)
    return terms


def _involution_factors(F: SymplecticMatrix) -> List[BitVector]:
    n = F.nrows
    residue = (BitMatrix.identity(n) + F).data
    # x(I+F) = Σ ⟨v,x⟩ v for commuting v's in Res(F), so Ω(I+F) = Σ v^t v.
    quadratic = (omega(n // 2).data.astype(np.int64) @ residue.astype(np.int64) % 2).astype(np.uint8)
    if not np.diag(quadratic).any():
        w = quadratic[np.nonzero(quadratic.any(axis=1))[0][0]].copy()
        terms = [w] + _rank_one_terms(quadratic ^ np.outer(w, w))
    else:
        terms = _rank_one_terms(quadratic)
    return [BitVector.from_bits(t) for t in terms]


def _sweep_factors(F: SymplecticMatrix) -> List[BitVector]:
    m, n = F.m, F.nrows
    images = F.rows
    applied: List[BitVector] = []
    placed: List[BitVector] = []

    def push(h: BitVector) -> None:
        nonlocal images
        images = [apply_transvection(h, x) for x in images]
        applied.append(h)

    for j in range(m):
        e, f = BitVector.unit(j, n), BitVector.unit(m + j, n)
        for h in map_vector(images[j], e, placed):
            push(h)
        placed.append(e)
        for h in map_vector(images[m + j], f, placed):
            push(h)
        placed.append(f)
    # F T_{h_1} ... T_{h_k} = I, and each T_h is its own inverse.
    return list(reversed(applied))


def compose_transvections(vectors: Sequence[BitVector], n: int) -> SymplecticMatrix:
    product = SymplecticMatrix.identity(n)
    for v in vectors:
        product = product @ transvection(v)
    return product


def transvection_decompose(F: SymplecticMatrix) -> List[BitVector]:
    """
    Ordered v_1..v_k with T_{v_1} T_{v_2} ... T_{v_k} = F.

    Involutions use the residue form: a non-hyperbolic involution needs
    exactly dim Res(F) independent vectors from Res(F), a hyperbolic one needs one
    more, dependent vector. Other matrices use a pairing sweep over the symplectic
    basis with at most two transvections per basis vector.
    """
    n = F.nrows
    if F == BitMatrix.identity(n):
        return []
    if is_involution(F):
        factors = _involution_factors(F)
    else:
        factors = _sweep_factors(F)
    factors = [v for v in factors if not v.is_zero()]
    if compose_transvections(factors, n) != F:
        raise InternalError("transvection factors do not recompose to the input")
    logger.debug("decomposed m=%d symplectic into %d transvections", n // 2, len(factors))
    return factors


def random_nonzero(length: int, rng: np.random.Generator) -> BitVector:
    while True:
        vector = BitVector.from_bits(rng.integers(0, 2, size=length))
        if not vector.is_zero():
            return vector


def random_invertible(m: int, rng: np.random.Generator) -> BitMatrix:
    while True:
        candidate = BitMatrix(rng.integers(0, 2, size=(m, m)))
        if candidate.is_invertible():
            return candidate


def random_symmetric(m: int, rng: np.random.Generator) -> BitMatrix:
    upper = np.triu(rng.integers(0, 2, size=(m, m)))
    return BitMatrix(upper | np.triu(upper, 1).T)


def random_symplectic(m: int, rng: np.random.Generator) -> SymplecticMatrix:
    """A random element of Sp(2m): F_D of a random P times random transvections."""
    product = f_d(random_invertible(m, rng))
    for _ in range(4 * m + 2):
        product = product @ transvection(random_nonzero(2 * m, rng))
    return product


def enumerate_symplectic(m: int) -> Iterator[SymplecticMatrix]:
    """Every element of Sp(2m) by brute force; only m = 1 is supported."""
    if m != 1:
        raise ValueError("Sp(2m) enumeration is only supported for m = 1")
    for code in range(16):
        candidate = BitMatrix(np.array([(code >> s) & 1 for s in (3, 2, 1, 0)]).reshape(2, 2))
        if is_symplectic(candidate):
            yield SymplecticMatrix(candidate, check=False)
