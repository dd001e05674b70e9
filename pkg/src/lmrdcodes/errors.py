"""Exception types raised across the package."""

from __future__ import annotations


class LmrdError(ValueError):
    """Base class for all package errors."""


class NotAPrimePower(LmrdError):
    pass


class FieldMismatch(LmrdError):
    pass


class DivisionByZero(LmrdError, ZeroDivisionError):
    pass


class AmbientMismatch(LmrdError):
    pass


class DimensionTooLarge(LmrdError):
    pass


class ShapeMismatch(LmrdError):
    pass


class InvalidDistance(LmrdError):
    pass


class TooLarge(LmrdError):
    pass


class CardinalityMismatch(LmrdError):
    pass


class ShapeViolation(LmrdError):
    pass


class WeightMismatch(LmrdError):
    pass


class ProfileViolation(LmrdError):
    pass


class PreconditionViolated(LmrdError):
    pass


class NotApplicable(LmrdError):
    pass


class InvalidSubcode(LmrdError):
    pass


class NotInvertible(LmrdError):
    pass


class NotFound(LmrdError):
    pass


class VerificationFailed(LmrdError):
    pass


class NegativeArgument(LmrdError):
    pass


class CodeFileError(LmrdError):
    """Malformed code file; ``lineno`` points at the offending line (1-based)."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
