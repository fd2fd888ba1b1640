"""
The third level of the Clifford hierarchy.

C^(1) is the Pauli group up to phase, and U is in C^(k) when U E U† is in
C^(k-1) for every Pauli E. Third-level operators fix some Pauli up to a Clifford
correction, which drives the constructions below.

Key components:
1. level_of: recursive hierarchy membership with a failure witness.
2. fixed_space, find_fixed_pauli, clifford_mapping and pointwise_fixing_correction.
3. semi_clifford_decompose for monomial operators, C = D E(a,0) G_D(P).
4. mcs_support: a Clifford G with G·C supported on a maximal commutative
   subgroup, and the semi-Clifford / generalized semi-Clifford predicates.
5. Corpora of third-level, monomial and non-monomial test operators.
"""
from __future__ import annotations

import logging
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from clifford import clifford_transvection, gate_gd, gate_gomega, phi, random_clifford
from config import DEFAULT_KMAX, DEFAULT_TOLERANCE
from errors import InternalError, NotAffine, NotClifford, NotMonomial, NotThirdLevel, PreconditionError
from gf2 import BitMatrix, BitVector, fix_space, map_vector, random_invertible, symplectic_inner
from pauli import PhasedPauli, StabilizerGroup, commutation_matrix, enumerate_mcs, is_mcs, stabilizer_elements
from weyl import as_phased_pauli, conjugate, expand, is_unitary, num_qubits, pauli_candidate

logger = logging.getLogger(__name__)


def _dagger(U: np.ndarray) -> np.ndarray:
    return np.asarray(U).conj().T


def _require_unitary(U: np.ndarray, tol: float) -> None:
    if not is_unitary(U, tol):
        raise PreconditionError("operator is not unitary")


def _generators(m: int) -> List[PhasedPauli]:
    n = 2 * m
    return [PhasedPauli.from_point(BitVector.unit(i, n)) for i in range(n)]


def _all_paulis(m: int) -> List[PhasedPauli]:
    n = 2 * m
    return [PhasedPauli.from_point(BitVector(code, n)) for code in range(1, 1 << n)]


# Hierarchy membership ########################################################


class HierarchyVerdict(NamedTuple):
    """
    Smallest level containing an operator, or None above k_max.

    witness is a Pauli whose conjugate leaves the level below k_max, when one exists.
    """

    level: Optional[int]
    k_max: int
    witness: Optional[PhasedPauli]

    def describe(self) -> str:
        if self.level is None:
            return f"above level {self.k_max}"
        return f"level {self.level}"


def _violation(U: np.ndarray, k: int, tol: float) -> Tuple[bool, Optional[PhasedPauli]]:
    """(member, witness) for membership of U in C^(k)."""
    if k == 1:
        return pauli_candidate(U, tol) is not None, None
    m = num_qubits(U)
    # Up to level 3 the lower level is a group, so generator conjugates suffice.
    probes = _generators(m) if k <= 3 else _all_paulis(m)
    dagger = _dagger(U)
    for p in probes:
        image = U @ p.to_dense(max_qubits=m) @ dagger
        member, _ = _violation(image, k - 1, tol)
        if not member:
            return False, p
    return True, None


def level_of(U: np.ndarray, k_max: int = DEFAULT_KMAX, tol: float = DEFAULT_TOLERANCE) -> HierarchyVerdict:
    """
    Classify U in the Clifford hierarchy up to level k_max.

    Args:
        U (np.ndarray): A dense unitary.
        k_max (int): Highest level tested.
        tol (float): Numerical tolerance.

    Returns:
        HierarchyVerdict: The smallest level, or None with a witness Pauli.

    Raises:
        PreconditionError: If U is not unitary or the requested depth is too costly.
    """
    U = np.asarray(U, dtype=complex)
    m = num_qubits(U)
    _require_unitary(U, tol)
    if k_max < 1:
        raise ValueError(f"k_max must be at least 1, got {k_max}")
    if (k_max >= 4 and m >= 3) or (k_max >= 3 and m > 3):
        cost = (2 * m) ** 2 * (4 ** m) ** max(k_max - 3, 0)
        raise PreconditionError(f"level {k_max} membership at m={m} needs about {cost} dense conjugations")
    witness = None
    for k in range(1, k_max + 1):
        member, witness = _violation(U, k, tol)
        if member:
            return HierarchyVerdict(k, k_max, None)
    return HierarchyVerdict(None, k_max, witness)


def _require_third_level(C: np.ndarray, tol: float) -> None:
    verdict = level_of(C, 3, tol)
    if verdict.level is None:
        raise NotThirdLevel(f"operator is not in the third level (witness {verdict.witness})")


# Fixed Paulis and Clifford corrections ########################################


def fixed_space(C: np.ndarray, tol: float = DEFAULT_TOLERANCE) -> BitMatrix:
    """
    Basis of the points c fixed by phi(C E C†) for every Pauli generator E.

    These are exactly the c for which C† E(c) C is a phased Pauli.

    Raises:
        NotThirdLevel: If some generator conjugate is not a Clifford.
    """
    C = np.asarray(C, dtype=complex)
    m = num_qubits(C)
    dagger = _dagger(C)
    blocks = []
    for p in _generators(m):
        try:
            F = phi(C @ p.to_dense(max_qubits=m) @ dagger, tol).F
        except NotClifford as exc:
            raise NotThirdLevel(f"conjugate of {p} is not a Clifford") from exc
        blocks.append(BitMatrix.identity(2 * m) + F)
    return BitMatrix.hstack(*blocks).left_kernel()


def find_fixed_pauli(C: np.ndarray, tol: float = DEFAULT_TOLERANCE) -> BitVector:
    """
    A nonzero c fixed by every F = phi(C E C†) for the Pauli generators E.

    Such a c exists for every third-level C: the images form a 2-group acting on the
    odd-size set of nonzero points, so some orbit is a singleton. E(c) then commutes
    or anticommutes with every C E C†, which makes C† E(c) C a phased Pauli that C
    maps back onto E(c). The least such c in (a|b) order is returned.

    Raises:
        NotThirdLevel: If some generator conjugate is not a Clifford.
        InternalError: If the common fixed space is trivial.
    """
    C = np.asarray(C, dtype=complex)
    m = num_qubits(C)
    dagger = _dagger(C)
    kernel = fixed_space(C, tol)
    if not kernel.nrows:
        raise InternalError("no nonzero point is fixed by every generator conjugate")
    reduced = kernel.row_basis()
    c = reduced.row(reduced.nrows - 1)
    if as_phased_pauli(dagger @ PhasedPauli.from_point(c).to_dense(max_qubits=m) @ C, tol) is None:
        raise InternalError(f"fixed point {c} does not pull back to a Pauli")
    logger.debug("fixed Pauli %s from a common fixed space of dimension %d", c, kernel.nrows)
    return c


def fixed_pauli_source(C: np.ndarray, c: BitVector, tol: float = DEFAULT_TOLERANCE) -> PhasedPauli:
    """The Hermitian Pauli C† E(c) C, which C conjugates onto E(c)."""
    return conjugate(_dagger(C), PhasedPauli.from_point(c), tol)


def clifford_mapping(
    sources: Sequence[PhasedPauli],
    targets: Sequence[PhasedPauli],
    tol: float = DEFAULT_TOLERANCE,
) -> np.ndarray:
    """
    A Clifford G with G s_j G† = t_j for every pair.

    Points are moved one at a time by at most two Clifford transvections that leave
    the already placed targets untouched; wrong signs are then flipped by a single
    Pauli anticommuting with exactly the affected targets.

    Raises:
        PreconditionError: If the lists differ in length or qubit count, contain a
            non-Hermitian Pauli, have different commutation relations, or the
            targets are dependent where a sign change is needed.
    """
    sources, targets = list(sources), list(targets)
    if len(sources) != len(targets):
        raise PreconditionError(f"{len(sources)} sources but {len(targets)} targets")
    if not sources:
        raise PreconditionError("clifford_mapping needs at least one Pauli")
    m = sources[0].m
    if any(p.m != m for p in sources + targets):
        raise PreconditionError("all Paulis must act on the same number of qubits")
    if not all(p.is_hermitian() for p in sources + targets):
        raise PreconditionError("clifford_mapping works with Hermitian Paulis only")
    if not np.array_equal(commutation_matrix(sources), commutation_matrix(targets)):
        raise PreconditionError("sources and targets have different commutation relations")

    G = np.eye(1 << m, dtype=complex)
    placed: List[BitVector] = []
    for source, target in zip(sources, targets):
        current = conjugate(G, source, tol).point
        try:
            route = map_vector(current, target.point, placed)
        except ValueError as exc:
            raise PreconditionError(str(exc)) from exc
        for h in route:
            G = clifford_transvection(h, max_qubits=m) @ G
        placed.append(target.point)

    wrong = [conjugate(G, s, tol).phase != t.phase for s, t in zip(sources, targets)]
    if any(wrong):
        columns = np.stack([BitVector.concat(*reversed(t.point.halves())).bits for t in targets], axis=1)
        flip = BitMatrix(columns).solve(BitVector.from_bits(wrong))
        if flip is None:
            raise PreconditionError("target signs cannot be matched by a Pauli")
        G = PhasedPauli.from_point(flip).to_dense(max_qubits=m) @ G

    for s, t in zip(sources, targets):
        if conjugate(G, s, tol) != t:
            raise InternalError(f"Clifford mapping sends {s} to {conjugate(G, s, tol)}, expected {t}")
    return G


def pointwise_fixing_correction(C: np.ndarray, S: StabilizerGroup, tol: float = DEFAULT_TOLERANCE) -> np.ndarray:
    """
    A Clifford G such that G·C fixes every generator of S.

    Raises:
        PreconditionError: If C maps some generator of S outside the Pauli group.
    """
    images = []
    for g in S.generators:
        try:
            images.append(conjugate(C, g, tol))
        except NotClifford as exc:
            raise PreconditionError(f"operator maps {g} outside the Pauli group") from exc
    return clifford_mapping(images, S.generators, tol)


def fixes_pointwise(U: np.ndarray, S: StabilizerGroup, tol: float = DEFAULT_TOLERANCE) -> bool:
    """Whether U E U† = E for every generator E of S."""
    U = np.asarray(U, dtype=complex)
    dagger = _dagger(U)
    for g in S.generators:
        E = g.to_dense(max_qubits=S.m)
        if np.abs(U @ E @ dagger - E).max() > tol:
            return False
    return True


def supported_on(U: np.ndarray, S: StabilizerGroup, tol: float = DEFAULT_TOLERANCE) -> bool:
    """Whether supp(U) lies inside the point set of S."""
    return expand(U, tol=tol).support() <= set(S.points())


def conjugate_group(U: np.ndarray, S: StabilizerGroup, tol: float = DEFAULT_TOLERANCE) -> StabilizerGroup:
    """U S U†, which must again be generated by Hermitian Paulis."""
    return StabilizerGroup([conjugate(U, g, tol) for g in S.generators], m=S.m)


# Semi-Clifford structure #####################################################


class SemiCliffordDecomposition(NamedTuple):
    """C = phase · D · E(a, 0) · G_D(P) with D diagonal and D[0, 0] = 1."""

    D: np.ndarray
    a: BitVector
    P: BitMatrix
    phase: complex

    def rebuild(self) -> np.ndarray:
        m = len(self.a)
        shift = PhasedPauli(self.a, BitVector.zeros(m)).to_dense(max_qubits=m)
        return self.phase * self.D @ shift @ gate_gd(self.P)


def semi_clifford_decompose(C: np.ndarray, tol: float = DEFAULT_TOLERANCE) -> SemiCliffordDecomposition:
    """
    Split an operator that fixes Z_N as a group into D · E(a,0) · G_D(P).

    Such an operator is monomial, C|v⟩ = α_v |π(v)⟩, and π is affine,
    π(v) = vP + a. The diagonal collects the α_v at the permuted positions.

    Raises:
        NotMonomial: If some column does not hold exactly one unit-modulus entry.
        NotAffine: If the permutation is not of the form v -> vP + a.
        InternalError: If the factors fail to rebuild C.
    """
    C = np.asarray(C, dtype=complex)
    m = num_qubits(C)
    n = 1 << m
    magnitudes = np.abs(C)
    support = magnitudes > tol
    if not (support.sum(axis=0) == 1).all():
        raise NotMonomial("some column does not have exactly one nonzero entry")
    image = magnitudes.argmax(axis=0)
    if len(set(image.tolist())) != n or np.abs(magnitudes[image, np.arange(n)] - 1).max() > tol:
        raise NotMonomial("nonzero entries do not form a unitary permutation pattern")

    a = int(image[0])
    rows = [BitVector(int(image[1 << (m - 1 - i)]) ^ a, m) for i in range(m)]
    P = BitMatrix.from_rows(rows)
    if not P.is_invertible():
        raise NotAffine("linear part of the permutation is singular")
    for v in range(n):
        if (BitVector(v, m) @ P).value ^ a != int(image[v]):
            raise NotAffine(f"basis state {v} breaks the affine pattern v -> vP + a")

    d = np.zeros(n, dtype=complex)
    d[image] = C[image, np.arange(n)]
    phase = d[0]
    decomposition = SemiCliffordDecomposition(np.diag(d / phase), BitVector(a, m), P, complex(phase))
    if np.abs(decomposition.rebuild() - C).max() > tol:
        raise InternalError("semi-Clifford factors do not rebuild the input")
    return decomposition


def is_semi_clifford(
    U: np.ndarray, tol: float = DEFAULT_TOLERANCE
) -> Optional[Tuple[StabilizerGroup, StabilizerGroup]]:
    """
    The first (S1, S2) with U S1 U† = S2 over all MCS S1, or None.

    Raises:
        ValueError: For m > 2.
    """
    m = num_qubits(U)
    if m > 2:
        raise ValueError(f"semi-Clifford search is limited to m <= 2, got {m}")
    for group in enumerate_mcs(m):
        try:
            image = conjugate_group(U, group, tol)
        except (NotClifford, ValueError):
            continue
        return group, image
    return None


class McsSupport(NamedTuple):
    """
    A Clifford G with G·C supported on (and fixing pointwise) the MCS group.

    searched is set when no fixed Pauli led to a logical MCS and the group was
    found by trying every maximal commutative subgroup.
    """

    G: np.ndarray
    group: StabilizerGroup
    searched: bool = False


def _z1(m: int) -> PhasedPauli:
    return PhasedPauli(BitVector.zeros(m), BitVector.unit(0, m))


def _lift(p: PhasedPauli) -> PhasedPauli:
    """I ⊗ p."""
    zero = BitVector.zeros(1)
    return PhasedPauli(BitVector.concat(zero, p.a), BitVector.concat(zero, p.b), p.phase)


def _unsigned(S: StabilizerGroup) -> StabilizerGroup:
    """The same point set with + signs and a reduced row echelon basis."""
    return StabilizerGroup([PhasedPauli.from_point(row) for row in S.generator_matrix().row_basis().rows])


def _search_fixing(U: np.ndarray, candidates: Iterable[StabilizerGroup], tol: float) -> Optional[McsSupport]:
    for group in candidates:
        try:
            correction = pointwise_fixing_correction(U, group, tol)
        except PreconditionError:
            continue
        return McsSupport(correction, group, searched=True)
    return None


def _logical_group(U: np.ndarray, tol: float) -> Optional[StabilizerGroup]:
    """
    An MCS containing Z_1 that U maps into the Pauli group, or None if none exists.

    U commutes with Z_1, so U = diag(U_0, U_1) with logical blocks on m - 1 qubits.
    I ⊗ R is mapped to a Pauli exactly when U_0 R U_0† = E(t) is one and the block
    twist V = U_1 U_0† sends E(t) to ±E(t). The admissible t form the subspace
    fixed_space(U_0) ∩ Fix(phi(V)), and any maximal isotropic subspace of it
    of dimension m - 1 gives the logical MCS.
    """
    m = num_qubits(U)
    z1 = _z1(m)
    if m == 1:
        return StabilizerGroup([z1])
    half = U.shape[0] // 2
    upper, lower = U[:half, :half], U[half:, half:]
    try:
        logical = fixed_space(upper, tol)
        twist = fix_space(phi(lower @ _dagger(upper), tol).F)
    except (NotThirdLevel, NotClifford, PreconditionError) as exc:
        logger.debug("logical blocks at m=%d are not third level: %s", m, exc)
        return None

    admissible = set(logical.span()) & set(twist.span())
    chosen: List[BitVector] = []
    for t in sorted(admissible):
        if t.is_zero() or any(symplectic_inner(t, s) for s in chosen):
            continue
        if chosen and BitMatrix.from_rows(chosen).contains(t):
            continue
        chosen.append(t)
    if len(chosen) != m - 1:
        logger.debug("admissible logical points at m=%d hold no subspace of dimension %d", m, m - 1)
        return None
    sources = [conjugate(_dagger(upper), PhasedPauli.from_point(t), tol) for t in chosen]
    return StabilizerGroup([z1] + [_lift(s) for s in sources])


def _mcs_support(C: np.ndarray, tol: float) -> McsSupport:
    m = num_qubits(C)
    candidates = [c for c in fixed_space(C, tol).span() if not c.is_zero()]
    for c in candidates:
        source = fixed_pauli_source(C, c, tol)
        H = pointwise_fixing_correction(C, StabilizerGroup([source]), tol)
        K = clifford_mapping([source], [_z1(m)], tol)
        K_dagger = _dagger(K)
        U = K @ H @ C @ K_dagger
        block = _logical_group(U, tol)
        if block is None:
            logger.debug("fixed Pauli %s leads to no logical MCS at m=%d", c, m)
            continue
        G = K_dagger @ pointwise_fixing_correction(U, block, tol) @ K @ H
        return McsSupport(G, conjugate_group(K_dagger, block, tol))

    logger.warning("none of %d fixed Paulis leads to a logical MCS at m=%d; searching MCS candidates", len(candidates), m)
    found = _search_fixing(C, enumerate_mcs(m), tol)
    if found is None:
        raise InternalError(f"no maximal commutative subgroup can be fixed pointwise at m={m}")
    return found


def mcs_support(C: np.ndarray, tol: float = DEFAULT_TOLERANCE) -> McsSupport:
    """
    A Clifford G such that G·C is supported on a maximal commutative subgroup.

    Each fixed Pauli, least first, is corrected to commute with C and moved onto
    Z_1. The Z_1 = ±1 blocks then determine which logical MCS extends Z_1 (see
    _logical_group), and the first fixed Pauli admitting one gives the result. An
    exhaustive MCS search is only the last resort, reported through
    McsSupport.searched. The returned group carries + signs, since fixing a Pauli
    pointwise does not depend on its sign.

    Raises:
        ValueError: For m > 3.
        NotThirdLevel: If C is not in the third level.
        InternalError: If the result fails its postcondition.
    """
    C = np.asarray(C, dtype=complex)
    m = num_qubits(C)
    if m > 3:
        raise ValueError(f"mcs_support is limited to m <= 3, got {m}")
    _require_third_level(C, tol)
    found = _mcs_support(C, tol)
    result = found._replace(group=_unsigned(found.group))
    if not is_mcs(result.group) or not fixes_pointwise(result.G @ C, result.group, tol):
        raise InternalError("corrected operator does not fix its MCS pointwise")
    if not supported_on(result.G @ C, result.group, tol):
        raise InternalError("corrected operator is not supported on its MCS")
    return result


def maps_span(C: np.ndarray, source: StabilizerGroup, target: StabilizerGroup, tol: float = DEFAULT_TOLERANCE) -> bool:
    """Whether C E C† is supported on target for every element E of source."""
    C = np.asarray(C, dtype=complex)
    points = set(target.points())
    dagger = _dagger(C)
    for element in stabilizer_elements(source):
        image = C @ element.to_dense(max_qubits=source.m) @ dagger
        if not expand(image, tol=tol).support() <= points:
            return False
    return True


def is_generalized_semi_clifford(
    C: np.ndarray, exhaustive: bool = False, tol: float = DEFAULT_TOLERANCE
) -> Tuple[bool, Optional[Tuple[StabilizerGroup, StabilizerGroup]]]:
    """
    Whether C maps the span of some MCS S onto the span of an MCS S'.

    By default the witness comes from mcs_support: G·C fixes S pointwise, so
    S' = G† S G. With exhaustive=True (m <= 2) every pair of MCS is tried instead.
    """
    C = np.asarray(C, dtype=complex)
    m = num_qubits(C)
    if exhaustive:
        if m > 2:
            raise ValueError(f"exhaustive search is limited to m <= 2, got {m}")
        groups = list(enumerate_mcs(m))
        for source in groups:
            for target in groups:
                if maps_span(C, source, target, tol):
                    return True, (source, target)
        return False, None
    result = mcs_support(C, tol)
    image = conjugate_group(_dagger(result.G), result.group, tol)
    if not maps_span(C, result.group, image, tol):
        return False, None
    return True, (result.group, image)


# Corpora #####################################################################


def random_third_level_diagonal(m: int, rng: np.random.Generator, factors: int = 3) -> np.ndarray:
    """A product of randomly placed T, CS and (for m >= 3) CCZ phases."""
    shifts = np.arange(m - 1, -1, -1)
    bits = (np.arange(1 << m)[:, None] >> shifts[None, :]) & 1
    angle = np.zeros(1 << m)
    kinds = ["t", "cs", "ccz"][: min(m, 3)]
    for _ in range(factors):
        kind = kinds[int(rng.integers(len(kinds)))]
        qubits = rng.choice(m, size=kinds.index(kind) + 1, replace=False)
        hit = bits[:, qubits].prod(axis=1)
        angle += {"t": np.pi / 4, "cs": np.pi / 2, "ccz": np.pi}[kind] * hit
    return np.diag(np.exp(1j * angle))


def third_level_corpus(m: int, count: int, rng: np.random.Generator) -> List[np.ndarray]:
    """Products G1 · D · G2 of random Cliffords around a diagonal third-level D."""
    return [
        random_clifford(m, rng) @ random_third_level_diagonal(m, rng) @ random_clifford(m, rng)
        for _ in range(count)
    ]


def monomial_corpus(m: int, count: int, rng: np.random.Generator) -> List[np.ndarray]:
    """D · E(a, 0) · G_D(P) with random phases, shift and invertible P."""
    corpus = []
    for _ in range(count):
        D = np.diag(np.exp(2j * np.pi * rng.random(1 << m)))
        shift = PhasedPauli(BitVector(int(rng.integers(0, 1 << m)), m), BitVector.zeros(m))
        corpus.append(D @ shift.to_dense(max_qubits=m) @ gate_gd(random_invertible(m, rng)))
    return corpus


def non_monomial_examples(m: int, count: int, rng: np.random.Generator) -> List[np.ndarray]:
    """Haar-like random unitaries alternating with Hadamard-type products."""
    examples = []
    for index in range(count):
        if index % 2:
            r = 1 + index // 2 % m
            examples.append(gate_gomega(r, m) @ random_third_level_diagonal(m, rng))
        else:
            gaussian = rng.normal(size=(1 << m, 1 << m)) + 1j * rng.normal(size=(1 << m, 1 << m))
            q, _ = np.linalg.qr(gaussian)
            examples.append(q)
    return examples
