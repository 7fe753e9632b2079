"""Exception hierarchy shared by the library, the CLI and the tool server.

Every error carries the process exit code the CLI reports for it.
"""
from __future__ import annotations


class TDAError(Exception):
    """Base class for all pyramid_tda errors."""

    exit_code = 1


class InternalError(TDAError):
    """A consistency check inside the library failed."""


class BasisMismatch(InternalError):
    pass


class PathsNotConnected(InternalError):
    pass


class InputError(TDAError):
    """Malformed user input."""

    exit_code = 2


class ParseError(InputError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class DuplicateVertexInSimplex(InputError):
    pass


class UnknownVertex(InputError):
    pass


class MalformedInterval(InputError):
    pass


class MalformedEPInterval(InputError):
    pass


class PreconditionError(TDAError):
    """Well-formed input that an operation cannot accept."""

    exit_code = 3


class NotInjective(PreconditionError):
    pass


class DimensionTooHigh(PreconditionError):
    pass


class LevelHitsVertex(PreconditionError):
    pass


class InvalidLevels(PreconditionError):
    pass


class MissingCoordinates(PreconditionError):
    pass


class TooLarge(PreconditionError):
    pass


class DegreeNotNormalized(PreconditionError):
    pass


class IndexOutOfRange(PreconditionError):
    pass


class ShapeMismatch(PreconditionError):
    pass


class SubNotContained(PreconditionError):
    pass


class NotAnInclusion(PreconditionError):
    pass


class SemanticError(TDAError):
    """The request mixes artifacts that have no meaning together."""

    exit_code = 4


class UnsupportedConversion(SemanticError):
    pass


class FlavorMismatch(SemanticError):
    pass
