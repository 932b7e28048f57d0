"""Exception hierarchy shared by all nashkit modules."""

from __future__ import annotations


class NashkitError(Exception):
    """Base class for every error raised by nashkit."""


class DimensionMismatch(NashkitError, ValueError):
    """Operands live in polynomial rings of different dimension."""


class ParseError(NashkitError, ValueError):
    """Malformed polynomial text.

    ``offset`` is the 0-based character position where parsing failed.
    """

    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.text = text


class LabelError(NashkitError, ValueError):
    """Unknown or duplicate row/column label in a submatrix request."""


class HypothesisViolation(NashkitError, ValueError):
    """Inputs do not satisfy the hypotheses of the requested construction."""


class ResourceCapExceeded(NashkitError, RuntimeError):
    """A Groebner computation hit its S-pair or degree cap."""

    def __init__(self, cap: str, limit: int, value: int):
        super().__init__(f"{cap} cap exceeded: {value} > {limit}")
        self.cap = cap
        self.limit = limit
        self.value = value


class PreconditionError(NashkitError, ValueError):
    """A germ-level precondition (singular point, isolatedness, unit) failed."""
