"""Shared exception types."""


class ValidityError(ValueError):
    """An input violates a structural invariant (malformed table, bad
    probability vector, out-of-range index, ...)."""
