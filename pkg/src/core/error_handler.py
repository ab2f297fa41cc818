#!/usr/bin/env python3
"""
Error handling utilities for batch drivers.

A synthesis or scoring batch must survive a bad record: the failure is logged
once, turned into a JSON-ready payload and the batch moves on.
"""

import logging
import traceback
from typing import Any, Callable, Dict, NamedTuple, Optional, Sequence

from src.core.errors import TabforgeError

ErrorDetails = Dict[str, Any]


class Outcome(NamedTuple):
    """Result of a guarded call: a value, or the details of what went wrong."""

    value: Any = None
    error: Optional[ErrorDetails] = None

    @property
    def ok(self) -> bool:
        return self.error is None


def error_details(error: BaseException) -> ErrorDetails:
    """Machine-readable payload for any exception."""
    if isinstance(error, TabforgeError):
        return error.details()
    return {"error": type(error).__name__, "message": str(error)}


def handle_error(
    error: Exception,
    logger: logging.Logger,
    context: str = "",
    should_raise: bool = False,
    fallback_action: Optional[Callable[[], Any]] = None,
) -> ErrorDetails:
    """
    Log a failure and describe it.

    Library errors are expected outcomes (bad markup, exhausted retries) and are
    logged without a traceback; anything else gets the full traceback.

    Args:
        error: The exception that was raised
        logger: The module-specific logger to use
        context: Record or sample id the failure belongs to
        should_raise: Re-raise after logging
        fallback_action: Called after logging; its own failure is logged too

    Returns:
        The error payload, with the context under "context" when given
    """
    prefix = f"[{context}] " if context else ""
    logger.error(f"{prefix}Error: {error}")
    if not isinstance(error, TabforgeError):
        logger.error(traceback.format_exc())

    if fallback_action:
        try:
            fallback_action()
        except Exception as fallback_err:
            logger.error(f"Fallback action failed: {fallback_err}")

    if should_raise:
        raise error

    details = error_details(error)
    if context:
        details["context"] = context
    return details


def safe_execute(
    func: Callable,
    logger: logging.Logger,
    context: str = "",
    args: Sequence = (),
    kwargs: Optional[Dict[str, Any]] = None,
) -> Outcome:
    """
    Call func, converting any exception into an Outcome carrying its details.

    Args:
        func: The function to execute
        logger: The module-specific logger to use
        context: Record or sample id, used in the log line and the payload
        args: Positional arguments for func
        kwargs: Keyword arguments for func

    Returns:
        Outcome(value=...) on success, Outcome(error=...) on failure
    """
    try:
        return Outcome(value=func(*args, **(kwargs or {})))
    except Exception as e:
        return Outcome(error=handle_error(e, logger, context=context))
