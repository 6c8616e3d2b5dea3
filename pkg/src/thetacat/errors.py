"""Shared exception types."""

from __future__ import annotations


class IncomposableError(ValueError):
    """Raised when two maps or classes have mismatched (co)domains."""


class WindowInsufficientError(ValueError):
    """Raised when a window is too small for the requested construction."""


class BudgetExceededError(RuntimeError):
    """Raised when a search exceeds its node budget.

    Carries the number of nodes visited before giving up.
    """

    def __init__(self, message: str, count: int):
        super().__init__(message)
        self.count = count


class ProofShapeViolation(RuntimeError):
    """Raised when a face intersection fails to be a union of faces.

    This is a genuine finding about the inductive filtration, not a bug,
    so the offending data is attached for inspection.
    """

    def __init__(self, message: str, data=None):
        super().__init__(message)
        self.data = data
