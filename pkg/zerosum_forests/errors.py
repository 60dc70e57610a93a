from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from zerosum_forests.schemas import UnresolvedReport


class ZeroSumError(Exception):
    """Base class for every error raised by zerosum_forests"""


class InvalidEdge(ZeroSumError, ValueError):
    pass


class ParityError(ZeroSumError, ValueError):
    pass


class DivisibilityError(ZeroSumError, ValueError):
    pass


class SpecError(ZeroSumError, ValueError):
    pass


class FormatError(ZeroSumError, ValueError):
    pass


class PreconditionError(ZeroSumError, ValueError):
    pass


class InvalidEmbedding(ZeroSumError):
    pass


class NotAFactor(ZeroSumError):
    pass


class TooLarge(ZeroSumError, RuntimeError):
    pass


class SearchExhausted(ZeroSumError, RuntimeError):
    pass


class InternalError(ZeroSumError, AssertionError):
    """A post-condition guaranteed by the underlying theorem did not hold"""


class Unresolved(ZeroSumError):
    """No zero-sum factor was reached after every solver stage.

    The attached report carries the best factor found and its diagnostics.
    """

    def __init__(self, message: str, report: UnresolvedReport):
        super().__init__(message)
        self.report = report


def format_error(error: Exception) -> str:
    """Format library errors into one-line user messages.

    Args:
        error: Exception to format

    Returns:
        User-friendly error message string
    """
    error_str = str(error)

    if isinstance(error, ParityError):
        return f"Parity Error: {error_str} (zero-sum labelings need n = 0 or 1 mod 4)"
    elif isinstance(error, DivisibilityError):
        return f"Divisibility Error: {error_str}"
    elif isinstance(error, (SpecError, FormatError, InvalidEdge)):
        return f"Input Error: {error_str}"
    elif isinstance(error, PreconditionError):
        return f"Precondition Error: {error_str}"
    elif isinstance(error, TooLarge):
        return f"Too Large: {error_str}"
    elif isinstance(error, Unresolved):
        return f"Unresolved: {error_str}"
    elif isinstance(error, ZeroSumError):
        return f"{type(error).__name__}: {error_str}"
    elif isinstance(error, OSError):
        return f"File Error: {error_str}"
    else:
        return f"Unexpected Error: {error_str}"
