"""
Errors
------

Exception hierarchy shared by the models and services. Identity checks never
raise on a mismatch; they report it. These exceptions cover invalid input and
computations that cannot be carried out exactly.
"""


class QInductError(Exception):
    """Base class for all errors raised by the workbench."""


class DivisionByZeroError(QInductError, ZeroDivisionError):
    """Raised when a Scalar is divided by zero."""


class PoleError(QInductError):
    """Raised when a Scalar is evaluated at a root of its denominator."""


class TruncationError(QInductError):
    """Raised when a product leaves the safe sub-span of a truncated algebra."""

    def __init__(self, left, right, cutoff):
        self.left = left
        self.right = right
        self.cutoff = cutoff
        super().__init__(
            f"Product of {left} and {right} leaves the safe sub-span (cutoff {cutoff})"
        )


class DescriptorValidationError(QInductError):
    """Raised when a serialized descriptor fails its schema or axioms suite."""


class MalformedCoactionError(QInductError):
    """Raised when a coaction table is not counital or not coassociative."""


class NonStarRepresentationError(QInductError):
    """Raised when a representation is not compatible with its inner product."""


class ConfigError(QInductError, ValueError):
    """Raised for invalid run configuration; maps to exit code 2."""
