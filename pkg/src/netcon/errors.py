"""Exception hierarchy shared across the package."""

from __future__ import annotations


class NetconError(Exception):
    """Base class for all netcon errors."""


class InvalidInstanceError(NetconError, ValueError):
    """An instance (or generator parameters) violates a structural invariant."""


class InstanceFormatError(InvalidInstanceError):
    """A text input could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SequenceError(NetconError, ValueError):
    """A build sequence is unusable (bad ids, duplicates, unconnected pairs)."""


class UnsupportedInstanceError(NetconError):
    """The instance is valid but outside what the chosen solver handles."""


class GuardExceededError(NetconError):
    """A size guard tripped; pass force=True (or the CLI --force flag) to override."""
