"""
Exception hierarchy shared by every grouplen module.

Caps and preconditions fail loudly: callers either catch `ResourceLimitError`
(the harness turns it into a SKIPPED record naming the cap) or let it surface.
"""

from __future__ import annotations

from typing import Optional, Sequence


class GroupLenError(Exception):
    """Base class for all grouplen errors."""


class ResourceLimitError(GroupLenError):
    """A configured cap would be exceeded."""

    def __init__(self, cap_name: str, cap_value: int, requested: Optional[int] = None, detail: str = ""):
        self.cap_name = cap_name
        self.cap_value = cap_value
        self.requested = requested
        message = f"{cap_name} exceeded (cap {cap_value}"
        if requested is not None:
            message += f", needed {requested}"
        message += ")"
        if detail:
            message += f": {detail}"
        super().__init__(message)


class MeatAxeFailure(ResourceLimitError):
    """A module could not be split or certified irreducible within the retry budget."""

    def __init__(self, retries: int, dimension: int):
        super().__init__("MEATAXE_RETRIES", retries, detail=f"no split or Norton certificate for a {dimension}-dimensional module")


class ContractViolationError(GroupLenError, ValueError):
    """A precondition of an operation does not hold."""

    def __init__(self, message: str, column: Optional[int] = None):
        self.column = column
        super().__init__(message)


class CorpusParseError(GroupLenError):
    """Positioned syntax or validation error in a group file."""

    def __init__(self, message: str, line: int, column: int = 1, expected: Sequence[str] = ()):
        self.reason = message
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        text = f"line {line}, column {column}: {message}"
        if self.expected:
            text += f" (expected {', '.join(self.expected)})"
        super().__init__(text)


class ExistenceFailure(GroupLenError):
    """No faithful irreducible constituent exists for the group/field pair."""


class ChainVerificationError(GroupLenError):
    """A stage of the counterexample chain failed its verification."""

    def __init__(self, stage: int, fact: str, detail: str = ""):
        self.stage = stage
        self.fact = fact
        message = f"chain stage {stage}: {fact} failed"
        if detail:
            message += f" ({detail})"
        super().__init__(message)
