"""Exception types shared across the package."""


class QbpError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(QbpError, ValueError):
    """A parameter or argument violates its documented domain."""


class TruncationFailure(QbpError, RuntimeError):
    """The term cap was reached before the tail bound dropped below target.

    Attributes carry the state at abort so callers can report or retry
    with a larger cap.
    """

    def __init__(self, message: str, terms_used: int = 0, bound_reached: float = float("inf")):
        super().__init__(message)
        self.terms_used = terms_used
        self.bound_reached = bound_reached


class HypothesisViolated(QbpError, ValueError):
    """A bound was requested for parameters outside its hypothesis region."""

    def __init__(self, message: str, margin: float = float("nan")):
        super().__init__(message)
        self.margin = margin


class DenominatorNearZero(QbpError, ArithmeticError):
    """A ratio denominator fell below the safe-magnitude threshold.

    Never silently skipped: the offending sample point is part of the
    diagnostic, because a vanishing denominator inside the disk is itself
    evidence against the boundedness premise of the ratio claim.
    """

    def __init__(self, message: str, point: complex, magnitude: float):
        super().__init__(message)
        self.point = point
        self.magnitude = magnitude


class WitnessSingular(QbpError, ArithmeticError):
    """The Moebius transform is undefined: the shifted ratio equals -1."""

    def __init__(self, message: str, point: complex):
        super().__init__(message)
        self.point = point
