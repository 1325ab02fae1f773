"""Exception types shared across the package.

Every error raised on a user-facing path derives from EkcpdError so the CLI
can map failures to stable exit codes in one place.
"""

from __future__ import annotations


class EkcpdError(Exception):
    """Base class for all package errors."""


class FormatError(EkcpdError):
    """Input file malformed or inconsistent with its declared shape."""


class ZeroVectorError(EkcpdError):
    """Row normalization hit a (near-)zero vector."""

    def __init__(self, row: int, norm: float):
        self.row = row
        self.norm = norm
        super().__init__(f"cannot normalize row {row}: norm {norm:.3e} is ~0")


class DegenerateSequenceError(EkcpdError):
    """Sequence unusable for the requested operation (e.g. no distinct pairs)."""


class IndexOutOfRangeError(EkcpdError):
    """Segment indices outside 1..T or start > end."""


class InfeasibleError(EkcpdError):
    """No segmentation satisfies the solver constraints."""


class TooLargeError(EkcpdError):
    """Input exceeds a guard bound (memory or combinatorial blow-up)."""


class InvalidKError(EkcpdError):
    """Requested number of change points outside 0..T-1."""


class WindowTooLargeError(EkcpdError):
    """Metric window does not fit the sequence length."""


class NoTrueChangesError(EkcpdError):
    """Boundary distance undefined for a reference with no change points."""


class DegenerateCurveError(EkcpdError):
    """Every penalty curve is constant; no elbow exists."""


class CostConsistencyError(EkcpdError):
    """Cached cost came out negative beyond rounding tolerance."""


class MaxChangepointsExceededError(InfeasibleError):
    """Optimum uses more change points than the configured cap."""


class AuthError(EkcpdError):
    """Embedding endpoint rejected the credentials."""


class NetworkError(EkcpdError):
    """Embedding endpoint unreachable or persistently failing."""
