"""Exception types shared across the package."""

from __future__ import annotations


class EmgParseError(ValueError):
    """Raised on malformed graph text; message carries a 1-based line number."""


class PreconditionError(ValueError):
    """An operation's stated hypotheses do not hold for the given input."""


class SurgeryError(ValueError):
    """A surgical operation would not produce a valid embedded graph."""


class AlgorithmError(RuntimeError):
    """An internal guarantee failed; indicates a bug, not bad input."""


class BudgetError(RuntimeError):
    """A configured search budget was exhausted before an answer was found."""
