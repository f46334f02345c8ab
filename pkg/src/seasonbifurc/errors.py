"""Exception types shared across the package."""

from __future__ import annotations

__all__ = ["SeasonBifurcError", "ConfigError", "IntegrationError"]


class SeasonBifurcError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(SeasonBifurcError):
    """Invalid run configuration (unknown key, bad value, inadmissible range).

    Carries the one-based line number of the offending config entry when the
    error originates from a file, so callers can print actionable diagnostics.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IntegrationError(SeasonBifurcError):
    """Time stepping produced a non-finite state."""

    def __init__(self, message: str, time: float | None = None):
        self.time = time
        super().__init__(message)
