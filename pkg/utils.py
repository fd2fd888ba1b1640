"""
File formats and report writing for the weylab command line.

Formats:
1. Dense matrix JSON: {"m": int, "re": [[...]], "im": [[...]]}.
2. F2 text: one row of 0/1 characters per line, an optional "m=<int>" header
   matching a row width of 2m (or m for a square block), blank lines and "#"
   comments ignored.
3. Pauli-string files: one Pauli string per line (see pauli.PhasedPauli).
4. Expansion lines: "<pauli-string> <re> <im>", sorted by (a|b).
5. Reports: {command, inputs, result, checks: [{name, pass, detail}]}.

Every parser raises errors.FormatError on malformed input.
"""
import sys
import json
import logging
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from errors import FormatError
from gf2 import BitMatrix, BitVector
from pauli import PhasedPauli
from weyl import WeylExpansion

logger = logging.getLogger(__name__)

_DIGITS = 12


class Check(BaseModel):
    """One named verification outcome."""

    model_config = ConfigDict(populate_by_name=True)

    name: str
    passed: bool = Field(alias="pass")
    detail: str = ""


class Report(BaseModel):
    """
    JSON report emitted by every structured subcommand.

    Attributes:
        command (str): Subcommand name, e.g. 'phi' or 'verify prop3'.
        inputs (Dict[str, Any]): Input paths and effective flags.
        result (Any): Subcommand-specific payload.
        checks (List[Check]): Verification outcomes.
    """

    command: str
    inputs: Dict[str, Any] = Field(default_factory=dict)
    result: Any = None
    checks: List[Check] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(check.passed for check in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(name=name, passed=bool(passed), detail=detail))
        return bool(passed)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json", by_alias=True), indent=2)


def read_input(path: Optional[str]) -> str:
    """
    Read a whole input file; None or '-' reads standard input.

    Raises:
        FormatError: If the file cannot be read.
    """
    if path is None or path == "-":
        logger.debug("reading input from stdin")
        return sys.stdin.read()
    logger.debug("reading input from %s", path)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise FormatError(f"cannot read '{path}': {exc}") from exc


def _clean(values: np.ndarray) -> List[List[float]]:
    # Adding 0.0 turns -0.0 into 0.0 so equal matrices print identically.
    return (np.round(values, _DIGITS) + 0.0).tolist()


def matrix_payload(M: np.ndarray) -> Dict[str, Any]:
    M = np.asarray(M, dtype=complex)
    return {"m": M.shape[0].bit_length() - 1, "re": _clean(M.real), "im": _clean(M.imag)}


def matrix_to_json(M: np.ndarray) -> str:
    return json.dumps(matrix_payload(M))


def parse_matrix_json(text: str) -> np.ndarray:
    """
    Parse dense matrix JSON.

    Raises:
        FormatError: On invalid JSON, missing keys, ragged or non-square arrays,
            a dimension that is not a power of two, or a mismatch with "m".
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"matrix input is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "re" not in payload:
        raise FormatError("matrix JSON needs at least an 're' array")
    try:
        real = np.asarray(payload["re"], dtype=float)
        imag = np.asarray(payload.get("im", np.zeros_like(real)), dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"matrix entries must be numbers in rectangular arrays: {exc}") from exc
    if real.ndim != 2 or real.shape[0] != real.shape[1]:
        raise FormatError(f"matrix must be square, got shape {real.shape}")
    if imag.shape != real.shape:
        raise FormatError(f"'im' has shape {imag.shape}, expected {real.shape}")
    n = real.shape[0]
    if n < 2 or n & (n - 1):
        raise FormatError(f"matrix dimension {n} is not a power of two")
    m = n.bit_length() - 1
    if "m" in payload and payload["m"] != m:
        raise FormatError(f"declared m={payload['m']} but the matrix acts on {m} qubits")
    return real + 1j * imag


def parse_f2_text(text: str) -> BitMatrix:
    """
    Parse F2 text into a BitMatrix.

    Raises:
        FormatError: On characters other than 0/1, ragged rows, or a header mismatch.
    """
    rows: List[str] = []
    declared = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip().replace(" ", "")
        if not line:
            continue
        if line.startswith("m="):
            try:
                declared = int(line[2:])
            except ValueError as exc:
                raise FormatError(f"bad header '{raw.strip()}'") from exc
            continue
        if set(line) - {"0", "1", "|"}:
            raise FormatError(f"'{raw.strip()}' is not a row of bits")
        rows.append(line.replace("|", ""))
    if not rows:
        raise FormatError("F2 text contains no rows")
    if len({len(row) for row in rows}) != 1:
        raise FormatError("F2 rows have different lengths")
    width = len(rows[0])
    # Rows are (a|b) points of width 2m, or an m x m block such as P or S.
    if declared is not None and 2 * declared != width and not declared == width == len(rows):
        raise FormatError(f"header m={declared} does not match rows of width {width}")
    return BitMatrix.from_strings(rows)


def format_f2(matrix: BitMatrix) -> List[str]:
    return str(matrix).splitlines()


def parse_pauli_lines(text: str) -> List[PhasedPauli]:
    paulis = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            paulis.append(PhasedPauli.from_string(line))
    if not paulis:
        raise FormatError("no Pauli strings found")
    return paulis


def parse_point(text: str, m: Optional[int] = None) -> BitVector:
    """Parse an (a|b) bit string, checking its length against m when given."""
    try:
        point = BitVector.from_str(text)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    if m is not None and len(point) != 2 * m:
        raise FormatError(f"point '{text}' should have {2 * m} bits")
    return point


def _number(value: float) -> str:
    value = round(float(value), _DIGITS) + 0.0
    return f"{value:.{_DIGITS}g}"


def format_expansion(W: WeylExpansion) -> List[str]:
    """One '<pauli-string> <re> <im>' line per support point, in (a|b) order."""
    return [
        f"{PhasedPauli.from_point(point).letters()} {_number(value.real)} {_number(value.imag)}"
        for point, value in W.items()
    ]


def expansion_payload(W: WeylExpansion) -> List[Dict[str, Any]]:
    return [
        {"point": str(point), "pauli": PhasedPauli.from_point(point).letters(), "re": _number(value.real), "im": _number(value.imag)}
        for point, value in W.items()
    ]
