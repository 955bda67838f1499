"""Exceptions shared across the package.

The CLI maps these to stable exit codes: bad input is 2, a blown resource
cap is 3. Verification failures are not exceptions; they are reported data.
"""


class InvalidInput(ValueError):
    """An argument violates a documented precondition."""


class MonotonicityViolation(RuntimeError):
    """An oracle declared monotone returned out-of-order values."""


class TooLarge(RuntimeError):
    """An exact oracle was asked to enumerate past its configured cap."""
