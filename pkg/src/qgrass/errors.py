"""Exception hierarchy.

Every error carries a stable ``code`` (reported by the CLI) and the process
exit status the CLI uses for it: 2 for invalid input, 3 for unsupported
cases, 4 when an enumeration budget is exhausted.
"""

from __future__ import annotations

from typing import Any


class QGrassError(Exception):
    code = "Error"
    exit_status = 2

    def __init__(self, detail: str = "", **info: Any):
        super().__init__(detail or self.code)
        self.detail = detail
        self.info = info

    def as_dict(self) -> dict:
        out = {"error": self.code, "detail": self.detail}
        if self.info:
            out["info"] = {k: _jsonable(v) for k, v in self.info.items()}
        return out


def _jsonable(v: Any) -> Any:
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return str(v)


class ValidationError(QGrassError):
    code = "ValidationError"


class MalformedInput(ValidationError):
    code = "MalformedInput"


class DanglingArrow(ValidationError):
    code = "DanglingArrow"


class DuplicateId(ValidationError):
    code = "DuplicateId"


class EmptyQuiver(ValidationError):
    code = "EmptyQuiver"


class NotMorphism(ValidationError):
    code = "NotMorphism"


class FoldAtSource(ValidationError):
    code = "FoldAtSource"


class FoldAtTarget(ValidationError):
    code = "FoldAtTarget"


class NotATree(ValidationError):
    code = "NotATree"


class NotABandDomain(ValidationError):
    code = "NotABandDomain"


class PeriodicBand(ValidationError):
    code = "PeriodicBand"

    def __init__(self, period: int, detail: str = ""):
        super().__init__(detail or f"band repeats after {period} steps", period=period)
        self.period = period


class NotPrimitive(ValidationError):
    code = "NotPrimitive"


class MixedKinds(ValidationError):
    code = "MixedKinds"


class InconsistentCycle(ValidationError):
    code = "InconsistentCycle"


class DimensionMismatch(ValidationError):
    code = "DimensionMismatch"


class TooManyArrowsAtVertex(ValidationError):
    code = "TooManyArrowsAtVertex"


class MissingRelation(ValidationError):
    code = "MissingRelation"


class NonPathRelation(ValidationError):
    code = "NonPathRelation"


class NotAdmissible(ValidationError):
    code = "NotAdmissible"


class BoundTooSmall(ValidationError):
    code = "BoundTooSmall"


class UnsupportedError(QGrassError):
    code = "Unsupported"
    exit_status = 3


class UnsupportedBandFlag(UnsupportedError):
    code = "UnsupportedBandFlag"


class UnsupportedModule(UnsupportedError):
    code = "UnsupportedModule"


class NotSupported(UnsupportedError):
    code = "NotSupported"


class EnumerationBudgetExceeded(QGrassError):
    code = "EnumerationBudgetExceeded"
    exit_status = 4


class NonIntegerResult(QGrassError):
    """Raised when an exact formula that must be integral is not; signals a bug."""

    code = "NonIntegerResult"
    exit_status = 1
