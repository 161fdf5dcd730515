"""Exception hierarchy."""
from __future__ import annotations


class AlmostComplexError(Exception):
    """Base class for all package errors."""


class IndexOutOfRange(AlmostComplexError, ValueError):
    pass


class InvalidFrame(AlmostComplexError, ValueError):
    """Structure data violating d² = 0; ``residual`` holds the first offending form."""

    def __init__(self, message: str, residual=None, gamma=None):
        super().__init__(message)
        self.residual = residual
        self.gamma = gamma


class TypeLeak(AlmostComplexError, ValueError):
    """A bracket produced a component outside the three expected types."""


class RankMismatch(AlmostComplexError, ValueError):
    pass


class SingularTransition(AlmostComplexError, ValueError):
    """det(I' - φ φ̄) = 0, so φ does not define an almost complex structure."""


class MCViolation(AlmostComplexError, ValueError):
    pass


class PreconditionViolation(AlmostComplexError, ValueError):
    def __init__(self, message: str, hypothesis: str = ""):
        super().__init__(message)
        self.hypothesis = hypothesis


class InducedMapIllDefined(AlmostComplexError, ArithmeticError):
    pass


class ManifestError(AlmostComplexError, ValueError):
    """Base class for invalid manifest input (exit code 2)."""


class ParseError(ManifestError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if field:
            loc.append(f"field {field}")
        super().__init__(f"{message} ({', '.join(loc)})" if loc else message)
        self.line = line
        self.field = field


class RangeError(ManifestError):
    pass


class RationalError(ManifestError):
    pass


class NonBeltramiInput(AlmostComplexError, ValueError):
    """A vector form is not of type A^{0,1}(T^{1,0}) where one is required."""
