"""Exception types shared across the package."""


class MoonframeError(Exception):
    """Base class for all package errors."""


class TruncationError(MoonframeError):
    """A series coefficient at or beyond the truncation bound was requested."""


class ConsistencyError(MoonframeError):
    """Two expansions that must agree exactly disagree (internal bug trap)."""


class BudgetExceededError(MoonframeError):
    """An enumeration or search ran out of its step/time budget.

    Carries whatever partial progress is available in ``progress``.
    """

    def __init__(self, message, progress=None):
        super().__init__(message)
        self.progress = progress or {}


class NotSublatticeError(MoonframeError):
    """The claimed sublattice does not embed integrally in the superlattice."""


class FixtureError(MoonframeError):
    """A fixture file is missing, malformed, or fails its own verification."""


class ParseError(MoonframeError):
    """A code/lattice/frame file could not be parsed."""
