"""Exception hierarchy.

Two families matter to callers: ``InputError`` subclasses mean the user handed
us something invalid (CLI exit code 1); ``InvariantViolation`` subclasses mean
an internal consistency check failed (CLI exit code 2).
"""

from __future__ import annotations


class WhError(Exception):
    """Base class for every error raised by this package."""


class InputError(WhError):
    pass


class InvariantViolation(WhError):
    pass


class ParseError(InputError):
    pass


class ValidationError(InputError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class DimensionError(InputError):
    pass


class ZeroVector(InputError):
    pass


class OrderTooLarge(InputError):
    pass


class NotInCatalog(InputError):
    pass


class UnknownDescriptor(InputError):
    pass


class NotCocompact(InputError):
    pass


class DegenerateLattice(InvariantViolation):
    pass


class TableViolation(InvariantViolation):
    pass


class ConjugacyViolation(InvariantViolation):
    """Two listed class representatives turned out to be conjugate."""


class CrossCheckFailure(InvariantViolation):
    """Two independent routes to the same value disagree."""
