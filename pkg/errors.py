"""
Exception hierarchy shared by every weylab module.

All domain failures derive from WeylabError so the command line can map them to
exit code 1, while FormatError (unreadable input) maps to exit code 2. Plain
argument-shape problems in library calls are reported with ValueError.
"""


class WeylabError(Exception):
    """Base class for all weylab domain errors."""


class FormatError(WeylabError):
    """Input text could not be parsed (matrix JSON, F2 text, Pauli strings, config)."""


class NotSymplectic(WeylabError):
    """A binary matrix fails F Ω F^t = Ω."""


class NotClifford(WeylabError):
    """A Pauli conjugate of the operator is not a phased Pauli."""


class NotThirdLevel(WeylabError):
    """The operator is not in the third level of the Clifford hierarchy."""


class NotMonomial(WeylabError):
    """The operator has a column without exactly one unit-modulus entry."""


class NotAffine(WeylabError):
    """The permutation of a monomial operator is not of the form v -> vP + a."""


class PreconditionError(WeylabError):
    """Inputs are well formed but violate the operation's stated precondition."""


class InternalError(WeylabError):
    """An algorithmic guarantee failed; always a bug or a counterexample."""
