"""Exception hierarchy shared by every module of the package."""


class FrHankelError(Exception):
    """Base class for all package errors."""


class ValidationError(FrHankelError, ValueError):
    """Input rejected before any numerical work is done."""


class OrderOutOfRange(ValidationError):
    pass


class DegenerateAngle(ValidationError):
    pass


class IdentityAngle(ValidationError):
    """The kernel at theta = n*pi is a delta distribution and has no pointwise value."""


class UnsupportedFamily(ValidationError):
    pass


class ParameterUnsupported(ValidationError):
    pass


class GridTooCoarse(ValidationError):
    pass


class NonPositiveSequence(ValidationError):
    pass


class NumericalError(FrHankelError, ArithmeticError):
    """A computation ran but could not reach its accuracy target."""


class AccuracyLoss(NumericalError):
    pass


class NoConvergence(NumericalError):
    """Panel budget exhausted.

    The best available estimate is kept on the exception so callers can
    decide whether it is usable.
    """

    def __init__(self, message, value=None, error_estimate=None, context=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
        self.context = dict(context or {})


class TruncationFailure(NumericalError):
    def __init__(self, message, radius=None, context=None):
        super().__init__(message)
        self.radius = radius
        self.context = dict(context or {})


class FitUnstable(NumericalError):
    pass
