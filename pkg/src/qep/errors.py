"""Exception types shared across the package."""

from __future__ import annotations


class QepError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(QepError):
    """Malformed theory or interpretation text."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}, column {col}: {message}"
        super().__init__(message)


class UndefinedAtomError(QepError):
    """An interpretation was read at an atom outside its domain."""


class NonCrispError(QepError):
    """A two-valued operation met the intermediate truth value."""


class CapExceededError(QepError):
    """An enumeration bound was exceeded; raise the cap explicitly to proceed."""


class NonConformingPolicyError(QepError):
    """A policy tree does not match the binder it is used with."""
