"""Exception hierarchy shared by every module.

All domain failures derive from :class:`DomainError`; the CLI maps that
family to exit code 65 and :class:`ParseError` to 64.
"""


class ToricPatchError(Exception):
    """Root of the package exceptions."""


class ParseError(ToricPatchError):
    pass


class DomainError(ToricPatchError):
    pass


class DimensionUnsupported(DomainError):
    pass


class DegenerateSpan(DomainError):
    pass


class DuplicatePoints(DomainError):
    pass


class ArityMismatch(DomainError):
    pass


class SizeMismatch(DomainError):
    pass


class OutsideDomain(DomainError):
    pass


class NonPositiveInput(DomainError):
    pass


class NotInterior(DomainError):
    pass


class MaxIterationsExceeded(DomainError):
    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class NonGenericLifting(DomainError):
    pass


class DegenerateLift(DomainError):
    pass


class InvalidTriangulation(DomainError):
    pass


class ConverseViolation(DomainError):
    """A sampled distance passed the converse threshold but the recovered
    triangulation differs from the one under test."""
