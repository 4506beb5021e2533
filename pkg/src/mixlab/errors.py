"""Exception hierarchy shared by every mixlab engine."""

from __future__ import annotations


class MixlabError(Exception):
    """Base class for recoverable input errors."""


class ModulusMismatch(MixlabError, ValueError):
    pass


class DimensionMismatch(MixlabError, ValueError):
    pass


class ExponentOverflow(MixlabError, OverflowError):
    pass


class PolySyntaxError(MixlabError, ValueError):
    """Raised by the text parsers; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class WorkBoundExceeded(MixlabError):
    """An enumeration would exceed its configured work bound."""


class WindowTooLarge(WorkBoundExceeded):
    pass
