"""Exception hierarchy shared by every module."""

from __future__ import annotations


class DualityError(Exception):
    """Base class for all errors raised by this package."""


class Singular(DualityError):
    """A square GF(2) matrix has no inverse."""


class RankDeficient(DualityError):
    """Generator rows are linearly dependent."""


class DimensionMismatch(DualityError):
    """An input has the wrong length or shape."""


class SizeLimit(DualityError):
    """An enumeration or dense oracle would exceed its configured cap."""


class OutOfRange(DualityError):
    """A channel parameter or step lies outside its legal domain."""


class NumericalRankLoss(DualityError):
    """A matrix that should have full column rank lost rank numerically."""


class StepTooSmall(DualityError):
    """A finite-difference step is below the floating-point noise floor."""


class ConfigError(DualityError):
    """Malformed code specification, code file, or suite configuration."""


class IdentityViolation(DualityError):
    """An identity that must hold exactly (integer arithmetic) did not."""
