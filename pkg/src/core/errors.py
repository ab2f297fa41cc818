#!/usr/bin/env python3
"""
Exception hierarchy for tabforge.

Every failure the library raises derives from TabforgeError so callers and the
CLI can catch one type. Exceptions carry structured attributes in addition to
their message.
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple


class TabforgeError(Exception):
    """Base class for all tabforge errors."""

    #: Exit status the CLI reports for this error family.
    exit_code = 1

    def details(self) -> Dict[str, Any]:
        """Structured payload used for machine-readable error output."""
        return {"error": type(self).__name__, "message": str(self)}


# Structural errors ---------------------------------------------------------


class InvalidMatrix(TabforgeError):
    """A cell matrix failed well-formedness checks."""

    def __init__(self, message: str, violations: Optional[Sequence[Tuple]] = None):
        super().__init__(message)
        self.violations = list(violations or [])

    def details(self) -> Dict[str, Any]:
        data = super().details()
        data["violations"] = [list(v) for v in self.violations]
        return data


class NonTiling(TabforgeError):
    """Logical cells overlap, leave gaps or fall outside the grid."""

    def __init__(self, message: str, position: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.position = position


class OutOfBounds(TabforgeError):
    """A crop or index request falls outside the matrix."""


class DimensionMismatch(TabforgeError):
    """Blocks and layout regions disagree on size."""


class Unpartitionable(TabforgeError):
    """A grid cannot be split into the requested number of blocks."""


# Markup errors -------------------------------------------------------------


class MalformedMarkup(TabforgeError):
    """Table markup is unbalanced or otherwise unparseable."""

    def __init__(self, message: str, side: Optional[str] = None):
        super().__init__(message)
        self.side = side

    def details(self) -> Dict[str, Any]:
        data = super().details()
        if self.side:
            data["side"] = self.side
        return data


class OverlappingSpans(MalformedMarkup):
    """Row or column spans collide during grid placement."""


class MultipleTables(MalformedMarkup):
    """Markup holds more than one table element."""


class GroundTruthMalformed(TabforgeError):
    """A ground-truth sample in a scoring batch cannot be parsed."""

    exit_code = 3

    def __init__(self, sample_id: str, cause: Exception):
        super().__init__(f"ground truth for '{sample_id}' is malformed: {cause}")
        self.sample_id = sample_id
        self.cause = cause

    def __reduce__(self):
        return (type(self), (self.sample_id, self.cause))


# Instruction errors --------------------------------------------------------


class ParamOutOfRange(TabforgeError):
    """Instruction parameters do not fit the bound table."""


class NoValidInstruction(TabforgeError):
    """No enabled instruction template yields a target for a table."""


# Synthesis errors ----------------------------------------------------------


class RetryBudgetExhausted(TabforgeError):
    """A rejection-sampling loop ran out of attempts."""

    def __init__(self, message: str, attempts: int):
        super().__init__(message)
        self.attempts = attempts


class NoCompatibleSource(TabforgeError):
    """No corpus table is large enough for a requested block."""

    def __init__(self, min_rows: int, min_cols: int, largest: Optional[List[Tuple[int, int]]] = None):
        largest = largest or []
        hint = f"; largest available dims: {largest}" if largest else ""
        super().__init__(
            f"no corpus table has at least {min_rows} rows and {min_cols} columns{hint}"
        )
        self.min_rows = min_rows
        self.min_cols = min_cols
        self.largest = largest


class ValidationExhausted(TabforgeError):
    """Generated content never passed validation within the retry budget."""

    def __init__(self, record_id: str, attempts: int, reason: str):
        super().__init__(
            f"record {record_id} rejected after {attempts} attempts: {reason}"
        )
        self.record_id = record_id
        self.attempts = attempts
        self.reason = reason


# Environment errors --------------------------------------------------------


class UnreadablePath(TabforgeError):
    """An input path does not exist or cannot be read."""

    exit_code = 3


class EmptyCorpus(TabforgeError):
    """A corpus holds no usable tables."""

    exit_code = 3


class ExternalClientError(TabforgeError):
    """The external generator or validator transport failed."""

    exit_code = 3

    def __init__(self, message: str, status: Optional[int] = None, record_id: Optional[str] = None):
        super().__init__(message)
        self.status = status
        self.record_id = record_id


class ConfigError(TabforgeError):
    """A configuration document is invalid."""

    exit_code = 2


def exit_code_for(error: BaseException) -> int:
    """
    Map an exception to a CLI exit status.

    Args:
        error: The exception raised by a command

    Returns:
        1 for validation failures, 2 for usage errors, 3 for I/O or
        external-client errors
    """
    if isinstance(error, TabforgeError):
        return error.exit_code
    if isinstance(error, (OSError, UnicodeDecodeError)):
        return 3
    if isinstance(error, ValueError):
        return 2
    return 1
