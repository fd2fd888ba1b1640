"""
Command line for weylab: Pauli expansions, the binary symplectic group and the
second and third levels of the Clifford hierarchy.

Subcommands:
1. gate: emit a named or parameterized gate as matrix JSON.
2. expand / support: the Pauli expansion of a matrix and its support points.
3. phi / bruhat / transvections: symplectic images and their decompositions.
4. classify / fix-pauli / mcs-support / semiclifford: third-level structure.
5. verify: run a named verification suite and report pass/fail counts.

Inputs given as '-' (or omitted) are read from stdin, so `gate cnot | expand`
works. Exit codes: 0 success, 1 domain error or failed suite, 2 usage error or
unreadable input.
"""
import sys
import logging
import argparse
from typing import Any, Dict, List, Optional

import numpy as np

import clifford
import hierarchy
import suites
from config import Settings, load_settings
from errors import FormatError, NotAffine, NotMonomial, WeylabError
from gf2 import SymplecticMatrix, bruhat_decompose, compose_transvections, transvection_decompose
from pauli import PhasedPauli, StabilizerGroup, is_mcs
from utils import (
    Report,
    expansion_payload,
    format_expansion,
    format_f2,
    matrix_payload,
    matrix_to_json,
    parse_f2_text,
    parse_matrix_json,
    parse_pauli_lines,
    parse_point,
    read_input,
)
from weyl import expand, num_qubits

logger = logging.getLogger("weylab")

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


def _add_input(parser: argparse.ArgumentParser, what: str) -> None:
    parser.add_argument("input", nargs="?", default="-", help=f"{what} file, or '-' for stdin (default)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="TOML settings file ([weylab] table or top level)")
    common.add_argument("--tolerance", type=float, default=None, help="Magnitude below which coefficients count as zero")
    common.add_argument("--max-qubits", type=int, default=None, help="Largest m for dense 2^m x 2^m matrices")
    common.add_argument("--seed", type=int, default=None, help="Seed for randomized suites")
    common.add_argument("--log-level", type=str, default=None, help="Logging level on stderr (default WARNING)")

    parser = argparse.ArgumentParser(
        prog="weylab", description="Pauli expansions, symplectic calculus and the Clifford hierarchy"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    gate = commands.add_parser("gate", parents=[common], help="Emit a gate as matrix JSON")
    gate.add_argument("name", type=str, help="Gate name (h, s, cnot, ..., 'h@i' placement), gd:<P-file>, gu:<S-file> or gomega:<r>")
    gate.add_argument("--tensor", type=int, default=1, help="Emit the k-fold tensor power of the gate")
    gate.add_argument("--m", type=int, default=None, help="Number of qubits for gomega:<r> (default r)")

    expand_cmd = commands.add_parser("expand", parents=[common], help="Pauli expansion of a matrix")
    _add_input(expand_cmd, "Matrix JSON")
    expand_cmd.add_argument("--json", action="store_true", help="Emit a JSON report instead of text lines")

    support = commands.add_parser("support", parents=[common], help="Support points of a matrix, one (a|b) per line")
    _add_input(support, "Matrix JSON")

    phi_cmd = commands.add_parser("phi", parents=[common], help="Symplectic tableau of a Clifford")
    _add_input(phi_cmd, "Matrix JSON")

    bruhat = commands.add_parser("bruhat", parents=[common], help="Bruhat decomposition of a symplectic matrix")
    _add_input(bruhat, "F2 text")

    transvections = commands.add_parser("transvections", parents=[common], help="Transvection decomposition of a symplectic matrix")
    _add_input(transvections, "F2 text")

    classify = commands.add_parser("classify", parents=[common], help="Smallest hierarchy level of a unitary")
    _add_input(classify, "Matrix JSON")
    classify.add_argument("--kmax", type=int, default=None, help="Highest level to test (default from settings)")

    fix_pauli = commands.add_parser("fix-pauli", parents=[common], help="A Pauli fixed by a third-level unitary")
    _add_input(fix_pauli, "Matrix JSON")
    fix_pauli.add_argument("--point", type=str, default=None, help="Check this (a|b) point instead of searching for one")

    mcs = commands.add_parser("mcs-support", parents=[common], help="Clifford correction supported on a maximal commutative subgroup")
    _add_input(mcs, "Matrix JSON")
    mcs.add_argument("--stabilizer", type=str, default=None, help="Pauli-string file naming the MCS to fix instead of searching for one")

    semi = commands.add_parser("semiclifford", parents=[common], help="Semi-Clifford and generalized semi-Clifford witnesses")
    _add_input(semi, "Matrix JSON")

    verify = commands.add_parser("verify", parents=[common], help="Run a verification suite")
    verify.add_argument("suite", type=str, choices=suites.suite_names(), help="Suite name")
    verify.add_argument("--m", type=int, default=None, help="Largest qubit count (suite default when omitted)")
    verify.add_argument("--count", type=int, default=None, help="Random instances (suite default when omitted)")
    return parser


def _settings(args: argparse.Namespace) -> Settings:
    overrides = {
        "tolerance": args.tolerance,
        "max_qubits": args.max_qubits,
        "seed": args.seed,
        "log_level": args.log_level,
        "kmax": getattr(args, "kmax", None),
    }
    return load_settings(args.config, overrides)


def _load_matrix(path: str, settings: Settings) -> np.ndarray:
    M = parse_matrix_json(read_input(path))
    m = num_qubits(M)
    if m > settings.max_qubits:
        raise ValueError(f"m={m} exceeds the configured maximum of {settings.max_qubits} qubits")
    return M


def _build_gate(args: argparse.Namespace) -> np.ndarray:
    kind, _, parameter = args.name.partition(":")
    if kind == "gd" and parameter:
        G = clifford.gate_gd(parse_f2_text(read_input(parameter)))
    elif kind == "gu" and parameter:
        G = clifford.gate_gu(parse_f2_text(read_input(parameter)))
    elif kind == "gomega" and parameter:
        try:
            r = int(parameter)
        except ValueError as exc:
            raise FormatError(f"gomega needs an integer rank, got '{parameter}'") from exc
        G = clifford.gate_gomega(r, args.m if args.m is not None else max(r, 1))
    else:
        G = clifford.get_gate(args.name)
    if args.tensor < 1:
        raise ValueError(f"--tensor must be at least 1, got {args.tensor}")
    return clifford.tensor_power(G, args.tensor)


def _symplectic(path: str) -> SymplecticMatrix:
    return SymplecticMatrix(parse_f2_text(read_input(path)))


def _generators(group: StabilizerGroup) -> List[str]:
    return [str(g) for g in group.generators]


def cmd_gate(args: argparse.Namespace, settings: Settings) -> int:
    G = _build_gate(args)
    if num_qubits(G) > settings.max_qubits:
        raise ValueError(f"gate acts on {num_qubits(G)} qubits, above the maximum of {settings.max_qubits}")
    print(matrix_to_json(G))
    return EXIT_OK


def cmd_expand(args: argparse.Namespace, settings: Settings) -> int:
    W = expand(_load_matrix(args.input, settings), tol=settings.tolerance, max_qubits=settings.max_qubits)
    if args.json:
        report = Report(command="expand", inputs={"input": args.input, "tolerance": settings.tolerance})
        report.result = {"m": W.m, "terms": expansion_payload(W), "norm_squared": W.norm_squared()}
        print(report.to_json())
    else:
        for line in format_expansion(W):
            print(line)
    return EXIT_OK


def cmd_support(args: argparse.Namespace, settings: Settings) -> int:
    W = expand(_load_matrix(args.input, settings), tol=settings.tolerance, max_qubits=settings.max_qubits)
    for point in W.points():
        print(point)
    return EXIT_OK


def cmd_phi(args: argparse.Namespace, settings: Settings) -> int:
    tableau = clifford.phi(_load_matrix(args.input, settings), settings.tolerance)
    report = Report(command="phi", inputs={"input": args.input, "tolerance": settings.tolerance})
    report.result = {"m": tableau.m, "F": format_f2(tableau.F), "signs": str(tableau.signs)}
    report.add("symplectic", True, f"F in Sp({2 * tableau.m})")
    print(report.to_json())
    return EXIT_OK


def cmd_bruhat(args: argparse.Namespace, settings: Settings) -> int:
    F = _symplectic(args.input)
    parts = bruhat_decompose(F)
    report = Report(command="bruhat", inputs={"input": args.input})
    report.result = {
        "p1": format_f2(parts.p1),
        "s1": format_f2(parts.s1),
        "rank": parts.rank,
        "s2": format_f2(parts.s2),
        "p2": format_f2(parts.p2),
    }
    report.add("recomposes", parts.recompose() == F, "F_D(P1) F_U(S1) F_Ω(r) F_U(S2) F_D(P2) = F")
    print(report.to_json())
    return EXIT_OK if report.ok else EXIT_DOMAIN


def cmd_transvections(args: argparse.Namespace, settings: Settings) -> int:
    F = _symplectic(args.input)
    vectors = transvection_decompose(F)
    report = Report(command="transvections", inputs={"input": args.input})
    report.result = {"count": len(vectors), "vectors": [str(v) for v in vectors]}
    report.add("recomposes", compose_transvections(vectors, F.nrows) == F, f"{len(vectors)} factors")
    print(report.to_json())
    return EXIT_OK if report.ok else EXIT_DOMAIN


def cmd_classify(args: argparse.Namespace, settings: Settings) -> int:
    verdict = hierarchy.level_of(_load_matrix(args.input, settings), settings.kmax, settings.tolerance)
    report = Report(command="classify", inputs={"input": args.input, "kmax": settings.kmax})
    report.result = {
        "level": verdict.level,
        "k_max": verdict.k_max,
        "verdict": verdict.describe(),
        "witness": str(verdict.witness) if verdict.witness is not None else None,
    }
    print(report.to_json())
    return EXIT_OK


def cmd_fix_pauli(args: argparse.Namespace, settings: Settings) -> int:
    C = _load_matrix(args.input, settings)
    report = Report(command="fix-pauli", inputs={"input": args.input, "point": args.point})
    if args.point is None:
        c = hierarchy.find_fixed_pauli(C, settings.tolerance)
    else:
        c = parse_point(args.point, num_qubits(C))
        if c.is_zero() or not hierarchy.fixed_space(C, settings.tolerance).contains(c):
            report.result = {"point": str(c), "pauli": PhasedPauli.from_point(c).letters(), "source": None}
            report.add("pulls back to a pauli", False, f"C† E({c}) C is not a nontrivial Pauli")
            print(report.to_json())
            return EXIT_DOMAIN
    source = hierarchy.fixed_pauli_source(C, c, settings.tolerance)
    report.result = {"point": str(c), "pauli": PhasedPauli.from_point(c).letters(), "source": str(source)}
    report.add("pulls back to a pauli", True, f"C† E({c}) C = {source}")
    print(report.to_json())
    return EXIT_OK


def _given_support(C: np.ndarray, path: str, tol: float) -> hierarchy.McsSupport:
    group = StabilizerGroup(parse_pauli_lines(read_input(path)))
    if group.m != num_qubits(C) or not is_mcs(group):
        raise ValueError(f"'{path}' does not hold a maximal commutative subgroup on {num_qubits(C)} qubits")
    return hierarchy.McsSupport(hierarchy.pointwise_fixing_correction(C, group, tol), group)


def cmd_mcs_support(args: argparse.Namespace, settings: Settings) -> int:
    C = _load_matrix(args.input, settings)
    if args.stabilizer is None:
        found = hierarchy.mcs_support(C, settings.tolerance)
    else:
        found = _given_support(C, args.stabilizer, settings.tolerance)
    corrected = found.G @ C
    report = Report(command="mcs-support", inputs={"input": args.input, "stabilizer": args.stabilizer})
    report.result = {
        "group": _generators(found.group),
        "points": [str(p) for p in found.group.points()],
        "G": matrix_payload(found.G),
        "searched": found.searched,
    }
    report.add("clifford correction", clifford.is_clifford(found.G, settings.tolerance))
    report.add("supported on group", hierarchy.supported_on(corrected, found.group, settings.tolerance))
    report.add("fixes group pointwise", hierarchy.fixes_pointwise(corrected, found.group, settings.tolerance))
    print(report.to_json())
    return EXIT_OK if report.ok else EXIT_DOMAIN


def _decomposition_payload(C: np.ndarray, tol: float) -> Optional[Dict[str, Any]]:
    try:
        parts = hierarchy.semi_clifford_decompose(C, tol)
    except (NotMonomial, NotAffine) as exc:
        logger.debug("no monomial decomposition: %s", exc)
        return None
    return {
        "diagonal": matrix_payload(parts.D),
        "a": str(parts.a),
        "P": format_f2(parts.P),
        "phase": [parts.phase.real, parts.phase.imag],
    }


def cmd_semiclifford(args: argparse.Namespace, settings: Settings) -> int:
    C = _load_matrix(args.input, settings)
    m = num_qubits(C)
    report = Report(command="semiclifford", inputs={"input": args.input})
    result: Dict[str, Any] = {"m": m, "semi_clifford": None, "generalized": None}
    if m <= 2:
        witness = hierarchy.is_semi_clifford(C, settings.tolerance)
        if witness is not None:
            result["semi_clifford"] = {"source": _generators(witness[0]), "target": _generators(witness[1])}
        report.add("semi-clifford", witness is not None)
    certified, pair = hierarchy.is_generalized_semi_clifford(C, tol=settings.tolerance)
    if pair is not None:
        result["generalized"] = {"source": _generators(pair[0]), "target": _generators(pair[1])}
    report.add("generalized semi-clifford", certified)
    result["decomposition"] = _decomposition_payload(C, settings.tolerance)
    report.result = result
    print(report.to_json())
    return EXIT_OK if report.ok else EXIT_DOMAIN


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    options = suites.SuiteOptions(
        seed=settings.seed,
        m=args.m,
        count=args.count,
        tolerance=settings.tolerance,
        max_qubits=settings.max_qubits,
    )
    report = suites.get_suite(args.suite, options).run()
    print(report.to_json())
    return EXIT_OK if report.ok else EXIT_DOMAIN


COMMANDS = {
    "gate": cmd_gate,
    "expand": cmd_expand,
    "support": cmd_support,
    "phi": cmd_phi,
    "bruhat": cmd_bruhat,
    "transvections": cmd_transvections,
    "classify": cmd_classify,
    "fix-pauli": cmd_fix_pauli,
    "mcs-support": cmd_mcs_support,
    "semiclifford": cmd_semiclifford,
    "verify": cmd_verify,
}


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse argv, run one subcommand and map failures to exit codes.

    Args:
        argv (Optional[List[str]]): Arguments without the program name; sys.argv when None.

    Returns:
        int: 0 on success, 1 on a domain error or failed check, 2 on a usage error.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK

    try:
        settings = _settings(args)
    except FormatError as exc:
        print(f"weylab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=settings.log_level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    try:
        return COMMANDS[args.command](args, settings)
    except FormatError as exc:
        print(f"weylab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, NotImplementedError) as exc:
        print(f"weylab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WeylabError as exc:
        print(f"weylab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(run())
