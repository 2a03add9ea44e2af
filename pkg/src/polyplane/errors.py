"""Shared error types."""


class BudgetExceededError(RuntimeError):
    """An exhaustive search was asked to do more work than its budget allows."""
