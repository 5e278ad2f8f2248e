"""Exception hierarchy.  Each class carries a short machine-readable ``code``."""

from __future__ import annotations


class TotrefError(Exception):
    code = "error"


class NotCommutative(TotrefError):
    code = "not-commutative"


class NotAssociative(TotrefError):
    code = "not-associative"


class NoUnit(TotrefError):
    code = "no-unit"


class NotLocal(TotrefError):
    code = "not-local"


class NotNilpotent(TotrefError):
    code = "not-nilpotent"


class NotArtinianDetected(TotrefError):
    code = "non-artinian-ring"


class FieldMismatch(TotrefError):
    code = "field-mismatch"


class AlgebraMismatch(TotrefError):
    code = "algebra-mismatch"


class CompositionMismatch(TotrefError):
    code = "composition-mismatch"


class InvalidModule(TotrefError):
    code = "invalid-module"


class NotCertified(TotrefError):
    code = "not-certified"


class LiftFailure(TotrefError):
    """A lift that theory guarantees could not be found (internal inconsistency)."""

    code = "lift-failure"


class GdimInfiniteAtBound(TotrefError):
    code = "gdim-infinite-at-bound"


class NotInGPerp(TotrefError):
    code = "not-in-gperp"


class ConstructionFailed(TotrefError):
    code = "construction-failed"


class WindowTooSmall(TotrefError):
    code = "window-too-small"


class UnknownProperty(TotrefError):
    code = "unknown-property"


class DefinitionSyntaxError(TotrefError):
    """Malformed definition text; ``line`` and ``col`` are 1-based."""

    code = "syntax-error"

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{message} (line {line}, column {col})" if line else message)
        self.line = line
        self.col = col


class UnknownRing(TotrefError):
    code = "unknown-ring"


class UnknownModule(TotrefError):
    code = "unknown-module"


class BadMatrixShape(TotrefError):
    code = "bad-matrix-shape"
