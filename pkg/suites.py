"""
Verification suites run by `main.py verify <suite>`.

Each suite checks one family of properties of the library against dense-matrix
oracles, on exhaustive small cases and seeded random instances, and records the
outcome as checks on a utils.Report.

1. An abstract VerificationSuite class holding the options, the seeded random
   generator and the progress bar.
2. One concrete suite per property family, registered in SUITES.
3. A factory function to instantiate a suite by name.
"""
import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, Iterable, List, Optional, Type

import numpy as np
from pydantic import BaseModel, Field
from tqdm import tqdm

import clifford
import hierarchy
from config import DEFAULT_MAX_QUBITS, DEFAULT_SEED, DEFAULT_TOLERANCE
from errors import NotAffine, NotClifford, NotMonomial, WeylabError
from gf2 import (
    BitMatrix,
    BitVector,
    bruhat_decompose,
    compose_transvections,
    dual_space,
    enumerate_symplectic,
    f_d,
    random_invertible,
    random_symmetric,
    random_symplectic,
    transvection_decompose,
)
from pauli import PhasedPauli, StabilizerGroup, commutes, is_mcs, mul
from utils import Report
from weyl import expand, is_unitary, projectively_equal, support_is_coset

logger = logging.getLogger(__name__)


class SuiteOptions(BaseModel):
    """
    Inputs shared by every suite.

    Attributes:
        seed (int): Seed of the numpy random generator.
        m (Optional[int]): Largest qubit count, or None for the suite default.
        count (Optional[int]): Random instances, or None for the suite default.
        tolerance (float): Numerical tolerance for expansions and comparisons.
        max_qubits (int): Dense-matrix ceiling.
    """

    seed: int = DEFAULT_SEED
    m: Optional[int] = Field(None, ge=1)
    count: Optional[int] = Field(None, ge=0)
    tolerance: float = DEFAULT_TOLERANCE
    max_qubits: int = DEFAULT_MAX_QUBITS


class VerificationSuite(ABC):
    """
    Abstract base class for a named property suite.

    Subclasses set name, description, default_m and default_count and implement
    verify(report).
    """

    name: str = ""
    description: str = ""
    default_m: int = 3
    default_count: int = 50

    def __init__(self, options: SuiteOptions) -> None:
        self.options = options
        self.rng = np.random.default_rng(options.seed)
        self.tol = options.tolerance

    @property
    def m(self) -> int:
        return self.options.m if self.options.m is not None else self.default_m

    @property
    def count(self) -> int:
        return self.options.count if self.options.count is not None else self.default_count

    def progress(self, iterable: Iterable, desc: str) -> Iterable:
        return tqdm(iterable, desc=f"{self.name}: {desc}", unit="case", leave=False, disable=None)

    def random_m(self, low: int = 1) -> int:
        return int(self.rng.integers(low, self.m + 1))

    @staticmethod
    def tally(report: Report, name: str, failures: List[str], total: int) -> None:
        detail = f"{total - len(failures)}/{total} passed"
        if failures:
            detail += f"; first failure: {failures[0]}"
        report.add(name, not failures, detail)

    def run(self) -> Report:
        """
        Run the suite into a fresh report.

        Returns:
            Report: Checks plus a result with pass/fail counts.
        """
        report = Report(
            command=f"verify {self.name}",
            inputs={"suite": self.name, "seed": self.options.seed, "m": self.m, "count": self.count},
        )
        self.verify(report)
        passed = sum(check.passed for check in report.checks)
        report.result = {"passed": passed, "failed": len(report.checks) - passed}
        logger.info("suite %s: %d passed, %d failed", self.name, passed, len(report.checks) - passed)
        return report

    @abstractmethod
    def verify(self, report: Report) -> None:
        """
        Add this suite's checks to report.

        Args:
            report (Report): The report to extend.
        """
        pass


def _points(values: Iterable[BitVector]) -> List[str]:
    return [str(p) for p in sorted(values)]


class CnotSuite(VerificationSuite):
    name = "cnot"
    description = "CNOT expansion, symplectic image, transvections and commutant"

    def verify(self, report: Report) -> None:
        cnot = clifford.get_gate("cnot")
        expansion = expand(cnot, tol=self.tol)
        golden = {"0000": 0.5, "0010": 0.5, "0100": 0.5, "0110": -0.5}
        observed = {str(p): v for p, v in expansion.items()}
        report.add(
            "expansion",
            observed.keys() == golden.keys() and all(abs(observed[k] - v) < 1e-12 for k, v in golden.items()),
            f"{observed}",
        )
        F = clifford.phi(cnot, self.tol).F
        report.add("phi", F == f_d(BitMatrix([[1, 1], [0, 1]])), str(F))
        factors = transvection_decompose(F)
        report.add(
            "transvections",
            len(factors) == 3 and compose_transvections(factors, 4) == F,
            " ".join(str(v) for v in factors),
        )
        commuting = clifford.commutant(cnot, self.tol)
        report.add("commutant", _points(commuting.span()) == _points(expansion.support()), str(_points(commuting.span())))


def example_w() -> np.ndarray:
    """(E(010,010) + E(011,001) + E(001,111) + E(101,011)) / 2, outside every hierarchy level."""
    pairs = [("010", "010"), ("011", "001"), ("001", "111"), ("101", "011")]
    terms = [PhasedPauli(BitVector.from_str(a), BitVector.from_str(b)).to_dense() for a, b in pairs]
    return sum(terms) / 2


class Example1Suite(VerificationSuite):
    name = "example1"
    description = "a unitary outside the Clifford group and the hierarchy"

    def verify(self, report: Report) -> None:
        W = example_w()
        report.add("unitary", is_unitary(W, self.tol))
        try:
            clifford.phi(W, self.tol)
            report.add("not clifford", False, "phi accepted W")
        except NotClifford as exc:
            report.add("not clifford", True, str(exc))
        verdict = hierarchy.level_of(W, 3, self.tol)
        report.add("above third level", verdict.level is None, verdict.describe())


def _all_square(m: int) -> Iterable[BitMatrix]:
    for code in range(1 << (m * m)):
        yield BitMatrix(np.array([(code >> s) & 1 for s in range(m * m - 1, -1, -1)]).reshape(m, m))


class Prop3Suite(VerificationSuite):
    name = "prop3"
    description = "closed-form supports of G_D(P), G_U(S), G_Ω(r) against expansions"
    default_m = 4
    default_count = 100

    def _compare(self, failures: List[str], closed: List[BitVector], dense: np.ndarray, label: str) -> None:
        observed = expand(dense, tol=self.tol).points()
        if sorted(closed) != observed:
            failures.append(f"{label}: {_points(closed)} vs {_points(observed)}")

    def verify(self, report: Report) -> None:
        failures: Dict[str, List[str]] = {"gd": [], "gu": [], "gomega": []}
        totals = {"gd": 0, "gu": 0, "gomega": 0}
        for P in _all_square(2):
            if P.is_invertible():
                totals["gd"] += 1
                self._compare(failures["gd"], clifford.support_gd(P).points(), clifford.gate_gd(P), str(P.data.tolist()))
        for S in _all_square(2):
            if S.is_symmetric():
                totals["gu"] += 1
                self._compare(failures["gu"], clifford.support_gu(S).points(), clifford.gate_gu(S), str(S.data.tolist()))
        for r in range(3):
            totals["gomega"] += 1
            self._compare(failures["gomega"], clifford.support_gomega(r, 2).points(), clifford.gate_gomega(r, 2), f"r={r}")

        for m in range(3, self.m + 1):
            for _ in self.progress(range(self.count), f"m={m}"):
                P = random_invertible(m, self.rng)
                S = random_symmetric(m, self.rng)
                r = int(self.rng.integers(0, m + 1))
                for kind in totals:
                    totals[kind] += 1
                self._compare(failures["gd"], clifford.support_gd(P).points(), clifford.gate_gd(P), str(P.data.tolist()))
                self._compare(failures["gu"], clifford.support_gu(S).points(), clifford.gate_gu(S), str(S.data.tolist()))
                self._compare(failures["gomega"], clifford.support_gomega(r, m).points(), clifford.gate_gomega(r, m), f"r={r}, m={m}")
        for kind in totals:
            self.tally(report, f"support {kind}", failures[kind], totals[kind])


class Prop4Suite(VerificationSuite):
    name = "prop4"
    description = "supports of local Clifford tensor products"
    default_m = 4
    default_count = 100

    def verify(self, report: Report) -> None:
        failures = []
        for _ in self.progress(range(self.count), "local"):
            factors = [clifford.random_clifford(1, self.rng) for _ in range(self.random_m())]
            closed = clifford.support_local(factors, self.tol)
            observed = expand(clifford.tensor(*factors), tol=self.tol).support()
            if closed != observed:
                failures.append(f"{_points(closed)} vs {_points(observed)}")
        self.tally(report, "interleaved product support", failures, self.count)


class Thm1Suite(VerificationSuite):
    name = "thm1"
    description = "closed-form coefficients and Hermiticity of transvection products"
    default_count = 200

    def _instance(self) -> tuple:
        m = self.random_m()
        n = 2 * m
        if self.rng.random() < 0.5:
            k = int(self.rng.integers(1, m + 1))
            F = random_symplectic(m, self.rng)
            rows = [BitVector.unit(m + j, n) @ F for j in range(k)]
            c0 = BitVector.from_bits([1] * k + [0] * (n - k)) @ F
            return c0, BitMatrix.from_rows(rows)
        k = int(self.rng.integers(1, min(4, n) + 1))
        while True:
            C = BitMatrix(self.rng.integers(0, 2, size=(k, n)))
            if C.rank() == k:
                break
        return BitVector(int(self.rng.integers(0, 1 << n)), n), C

    def verify(self, report: Report) -> None:
        coefficient_failures, hermitian_failures, trace_failures = [], [], []
        hermitian_count = 0
        for _ in self.progress(range(self.count), "products"):
            c0, C = self._instance()
            dense = clifford.transvection_product(c0, C)
            observed = expand(dense, tol=self.tol)
            closed = clifford.hermitian_product_coefficients(c0, C)
            points = observed.support() | closed.support()
            if any(abs(observed.coefficient(p) - closed.coefficient(p)) > 1e-9 for p in points):
                coefficient_failures.append(f"c0={c0} C={C.data.tolist()}")
            predicted = clifford.is_hermitian_product(c0, C)
            actual = bool(np.abs(dense - dense.conj().T).max() <= 1e-9)
            if predicted != actual:
                hermitian_failures.append(f"c0={c0} C={C.data.tolist()} predicted {predicted}")
            if actual:
                hermitian_count += 1
                if abs(np.trace(dense)) >= 1e-9:
                    trace_failures.append(f"c0={c0} C={C.data.tolist()}")
        self.tally(report, "coefficients", coefficient_failures, self.count)
        self.tally(report, "hermitian criterion", hermitian_failures, self.count)
        self.tally(report, "hermitian implies traceless", trace_failures, hermitian_count)


class Prop2Suite(VerificationSuite):
    name = "prop2"
    description = "support inside the dual of the commutant, group/coset dichotomy"
    default_count = 200

    def verify(self, report: Report) -> None:
        inclusion_failures, coset_failures = [], []
        for _ in self.progress(range(self.count), "cliffords"):
            m = self.random_m()
            G = clifford.random_clifford(m, self.rng)
            expansion = expand(G, tol=self.tol)
            allowed = set(dual_space(clifford.commutant(G, self.tol)).span())
            if not expansion.support() <= allowed:
                inclusion_failures.append(f"m={m} support {_points(expansion.support())}")
            shape = support_is_coset(expansion)
            has_trace = abs(np.trace(G)) > 1e-6
            if shape.kind == "neither" or (shape.kind == "group") != has_trace:
                coset_failures.append(f"m={m} kind={shape.kind} trace={abs(np.trace(G)):.3g}")
        self.tally(report, "support in dual commutant", inclusion_failures, self.count)
        self.tally(report, "group iff trace", coset_failures, self.count)


class DecomposeSuite(VerificationSuite):
    name = "decompose"
    description = "Bruhat and transvection decompositions recompose exactly"
    default_m = 4
    default_count = 200

    def _cases(self) -> List[Any]:
        cases = list(enumerate_symplectic(1))
        for m in range(2, self.m + 1):
            cases += [random_symplectic(m, self.rng) for _ in range(self.count)]
        return cases

    def verify(self, report: Report) -> None:
        cases = self._cases()
        bruhat_failures, transvection_failures, preimage_failures, diagonal_failures = [], [], [], []
        lifted = 0
        for F in self.progress(cases, "symplectic"):
            parts = None
            try:
                parts = bruhat_decompose(F)
                if parts.recompose() != F:
                    bruhat_failures.append(str(F.data.tolist()))
            except WeylabError as exc:
                bruhat_failures.append(f"{F.data.tolist()}: {exc}")
            try:
                if compose_transvections(transvection_decompose(F), F.nrows) != F:
                    transvection_failures.append(str(F.data.tolist()))
            except WeylabError as exc:
                transvection_failures.append(f"{F.data.tolist()}: {exc}")
            if F.m <= 3:
                lifted += 1
                if clifford.phi(clifford.preimage(F), self.tol).F != F or clifford.phi(clifford.bruhat_gate(F), self.tol).F != F:
                    preimage_failures.append(str(F.data.tolist()))
                for S in () if parts is None else (parts.s1, parts.s2):
                    if not projectively_equal(clifford.diagonal_transvections(S).dense(), clifford.gate_gu(S), self.tol):
                        diagonal_failures.append(str(S.data.tolist()))
        self.tally(report, "bruhat recomposition", bruhat_failures, len(cases))
        self.tally(report, "transvection recomposition", transvection_failures, len(cases))
        self.tally(report, "clifford preimages", preimage_failures, lifted)
        self.tally(report, "diagonal transvections", diagonal_failures, 2 * lifted)


class PauliSuite(VerificationSuite):
    name = "pauli"
    description = "phase-exact Pauli products against dense matrices"
    default_m = 4
    default_count = 1000

    def verify(self, report: Report) -> None:
        singles = [
            PhasedPauli(BitVector(a, 1), BitVector(b, 1), t) for a in range(2) for b in range(2) for t in range(8)
        ]
        failures = []
        for p in singles:
            for q in singles:
                if not np.allclose(mul(p, q).to_dense(), p.to_dense() @ q.to_dense(), atol=1e-12):
                    failures.append(f"{p} * {q}")
        self.tally(report, "exhaustive m=1 products", failures, len(singles) ** 2)

        product_failures, commute_failures = [], []
        for _ in self.progress(range(self.count), "random pairs"):
            m = self.random_m(low=min(2, self.m))
            p, q = (
                PhasedPauli.from_point(BitVector(int(self.rng.integers(0, 1 << (2 * m))), 2 * m), int(self.rng.integers(8)))
                for _ in range(2)
            )
            P, Q = p.to_dense(), q.to_dense()
            if not np.allclose(mul(p, q).to_dense(), P @ Q, atol=1e-12):
                product_failures.append(f"{p} * {q}")
            if commutes(p, q) != np.allclose(P @ Q, Q @ P, atol=1e-12):
                commute_failures.append(f"{p}, {q}")
        self.tally(report, "random products", product_failures, self.count)
        self.tally(report, "commutation", commute_failures, self.count)


class Thm2Suite(VerificationSuite):
    name = "thm2"
    description = "semi-Clifford decomposition of monomial operators"
    default_count = 50

    def verify(self, report: Report) -> None:
        failures = []
        for _ in self.progress(range(self.count), "monomial"):
            m = self.random_m()
            C = hierarchy.monomial_corpus(m, 1, self.rng)[0]
            try:
                rebuilt = hierarchy.semi_clifford_decompose(C, self.tol).rebuild()
                if np.abs(rebuilt - C).max() > 1e-9:
                    failures.append(f"m={m} rebuild mismatch")
            except WeylabError as exc:
                failures.append(f"m={m}: {exc}")
        self.tally(report, "roundtrip", failures, self.count)

        rejected = []
        examples = hierarchy.non_monomial_examples(self.m, 10, self.rng)
        for index, U in enumerate(examples):
            try:
                hierarchy.semi_clifford_decompose(U, self.tol)
                rejected.append(f"example {index} accepted")
            except NotMonomial:
                pass
        self.tally(report, "non-monomial rejected", rejected, len(examples))

        toffoli = clifford.tensor(np.eye(4), np.eye(2)).astype(complex)
        toffoli[6:, 6:] = clifford.get_gate("x")
        try:
            hierarchy.semi_clifford_decompose(toffoli, self.tol)
            report.add("toffoli not affine", False, "decomposition accepted a non-affine permutation")
        except NotAffine as exc:
            report.add("toffoli not affine", True, str(exc))


class Thm3Suite(VerificationSuite):
    name = "thm3"
    description = "fixed Paulis, MCS supports and generalized semi-Cliffords on the third-level corpus"
    default_count = 50

    def verify(self, report: Report) -> None:
        fixed_failures, support_failures, general_failures, semi_failures, searched = [], [], [], [], []
        total = semi_total = 0
        for m in range(1, min(self.m, 3) + 1):
            corpus = hierarchy.third_level_corpus(m, self.count, self.rng)
            for C in self.progress(corpus, f"m={m}"):
                total += 1
                try:
                    hierarchy.find_fixed_pauli(C, self.tol)
                except WeylabError as exc:
                    fixed_failures.append(f"m={m}: {exc}")
                try:
                    result = hierarchy.mcs_support(C, self.tol)
                    GC = result.G @ C
                    if not (
                        is_mcs(result.group)
                        and len(result.group.points()) == 1 << m
                        and hierarchy.supported_on(GC, result.group, self.tol)
                        and hierarchy.fixes_pointwise(GC, result.group, self.tol)
                    ):
                        support_failures.append(f"m={m}: postcondition")
                    if result.searched:
                        searched.append(f"m={m}")
                except WeylabError as exc:
                    support_failures.append(f"m={m}: {exc}")
                try:
                    certified, _ = hierarchy.is_generalized_semi_clifford(C, tol=self.tol)
                    if not certified:
                        general_failures.append(f"m={m}")
                except WeylabError as exc:
                    general_failures.append(f"m={m}: {exc}")
                if m <= 2:
                    semi_total += 1
                    if hierarchy.is_semi_clifford(C, self.tol) is None:
                        semi_failures.append(f"m={m}")
        self.tally(report, "fixed pauli", fixed_failures, total)
        self.tally(report, "mcs support", support_failures, total)
        self.tally(report, "mcs support without search", searched, total)
        self.tally(report, "generalized semi-clifford", general_failures, total)
        self.tally(report, "semi-clifford for m <= 2", semi_failures, semi_total)


COUNTEREXAMPLE = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0]], dtype=complex)


class CounterexampleSuite(VerificationSuite):
    name = "counterexample"
    description = "a Clifford permutation that commutes with no Pauli"

    def verify(self, report: Report) -> None:
        report.add("clifford", clifford.is_clifford(COUNTEREXAMPLE, self.tol))
        commuting = clifford.commutant(COUNTEREXAMPLE, self.tol)
        report.add("empty commutant", commuting.nrows == 0, f"dimension {commuting.nrows}")
        cnot = clifford.get_gate("cnot")
        z_group = StabilizerGroup.z_group(2)
        report.add(
            "cnot fixes span of Z_4 but is not supported on it",
            hierarchy.maps_span(cnot, z_group, z_group, self.tol) and not hierarchy.supported_on(cnot, z_group, self.tol),
        )


SUITES: Dict[str, Type[VerificationSuite]] = {
    suite.name: suite
    for suite in (
        CnotSuite,
        Example1Suite,
        Prop3Suite,
        Prop4Suite,
        Thm1Suite,
        Prop2Suite,
        DecomposeSuite,
        PauliSuite,
        Thm2Suite,
        Thm3Suite,
        CounterexampleSuite,
    )
}


class AllSuite(VerificationSuite):
    name = "all"
    description = "every suite in sequence"

    def verify(self, report: Report) -> None:
        for name, suite_class in SUITES.items():
            sub_report = suite_class(self.options).run()
            for check in sub_report.checks:
                report.add(f"{name}: {check.name}", check.passed, check.detail)


def get_suite(suite_name: str, options: Optional[SuiteOptions] = None) -> VerificationSuite:
    """
    Factory function to create a verification suite by name.

    Args:
        suite_name (str): One of the registered suite names or 'all'.
        options (Optional[SuiteOptions]): Seed, sizes and tolerance; defaults when None.

    Returns:
        VerificationSuite: The suite instance.

    Raises:
        NotImplementedError: If the suite name is not registered.
    """
    options = options or SuiteOptions()
    if suite_name == AllSuite.name:
        return AllSuite(options)
    if suite_name not in SUITES:
        raise NotImplementedError(f"Verification suite '{suite_name}' is not implemented.")
    return SUITES[suite_name](options)


def suite_names() -> List[str]:
    return list(SUITES) + [AllSuite.name]
