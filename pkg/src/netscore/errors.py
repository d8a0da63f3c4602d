"""Typed errors shared across the scoring pipeline."""

from __future__ import annotations


class NetscoreError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(NetscoreError, ValueError):
    """Inputs violate a scoring precondition (bad file, bad shape, bad values)."""


class DegenerateEstimateError(ValidationError):
    """The estimate has no nonzero weights, so no threshold grid exists."""


class DegenerateNullError(ValidationError):
    """The estimate is invariant under every vertex relabeling, so the
    permutation null distribution is a point mass and the test is vacuous."""


class DegenerateClassError(NetscoreError):
    """A confusion-based statistic is undefined because one label class is empty.

    ``empty_class`` records which side is missing ("positive" or "negative").
    """

    def __init__(self, empty_class: str, message: str | None = None):
        self.empty_class = empty_class
        if message is None:
            message = f"no {empty_class} examples among the scored cells"
        super().__init__(message)


class ConvergenceError(NetscoreError):
    """Power iteration failed to satisfy the stopping rule within the cap."""
