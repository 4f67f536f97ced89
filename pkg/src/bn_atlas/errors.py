"""Exception hierarchy shared by every module."""

from __future__ import annotations


class BNError(Exception):
    """Base class. ``code`` is a short machine-readable tag."""

    code = "error"

    def __init__(self, message: str, code: str | None = None) -> None:
        super().__init__(message)
        if code is not None:
            self.code = code


class DomainError(BNError, ValueError):
    """Input outside the domain of an operation."""

    code = "domain"


class NoDecompositionFound(BNError):
    """A bounded search finished without producing a verified object."""

    code = "no-decomposition-found"
