"""Exception types raised across the package."""


class RfFsoError(Exception):
    """Base class for all package errors."""


class DomainError(RfFsoError, ValueError):
    """Argument outside the mathematical domain of a function."""


class RangeError(RfFsoError, OverflowError):
    """Result not representable in double precision."""


class UnsupportedParametersError(RfFsoError, ValueError):
    """Parameters the numerical method cannot handle (e.g. no separating contour)."""


class DegenerateParametersError(RfFsoError, ValueError):
    """Coincident poles or a vanishing denominator in a closed-form expression."""


class AccuracyError(RfFsoError, ArithmeticError):
    """A numerical method did not reach its accuracy target.

    ``estimate`` holds the achieved error estimate when one is available.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class UnsupportedCombinationError(RfFsoError, ValueError):
    """Protocol / hardware combination the model does not define (e.g. DF with HPA)."""


class ModelMismatchError(RfFsoError):
    """Sampler self-test disagrees with the analytic moments."""
