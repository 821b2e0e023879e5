"""Exception types shared across the package."""

from __future__ import annotations


class QuiverlocError(Exception):
    """Base class for all package-specific errors."""


class UnsupportedFieldError(QuiverlocError):
    """An enumerative operation was asked to run over a non-finite field."""


class BudgetExceededError(QuiverlocError):
    """A bounded search ran out of its enumeration budget.

    Distinct from a negative answer: the search was cut short, nothing
    was decided.
    """


class InconclusiveError(QuiverlocError):
    """A randomized search exhausted its tries without reaching a verdict."""


class HomPerpRejection(QuiverlocError):
    """A candidate generator set failed validation.

    Attributes:
        kind: one of "not-bound", "nonzero-hom", "non-division-endomorphisms",
            "duplicate-class", "mixed-quiver", "mixed-field".
        indices: positions of the offending candidate(s) in the input list.
    """

    def __init__(self, kind: str, indices: tuple[int, ...], detail: str = ""):
        self.kind = kind
        self.indices = indices
        self.detail = detail
        msg = f"{kind} at candidate(s) {indices}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NonStabilizingError(QuiverlocError):
    """A localisation chain required to stabilize did not.

    Carries the vertex whose projective failed to stabilize, when relevant.
    """

    def __init__(self, message: str, vertex: int | None = None):
        self.vertex = vertex
        super().__init__(message)


class ParseError(QuiverlocError):
    """A problem file failed to parse or validate.

    Attributes:
        line: 1-based line number of the offending statement, 0 if global.
        kind: "syntax", "unresolved-reference" or "invariant-violation".
    """

    def __init__(self, line: int, kind: str, message: str):
        self.line = line
        self.kind = kind
        super().__init__(f"line {line}: {kind}: {message}")
