"""Exception hierarchy for rayinv."""


class RayInvError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(RayInvError):
    pass


class DomainError(RayInvError, ValueError):
    """A point or index lies outside the domain of the function."""


class ValidationError(RayInvError, ValueError):
    pass


class UnsupportedFieldError(RayInvError):
    pass


class UnsupportedLevelError(RayInvError):
    pass


class HypothesisError(RayInvError):
    """Inputs fall outside the range where a generation/inequality claim holds."""


class ExponentNotExactError(RayInvError):
    def __init__(self, exponent, required):
        self.exponent = exponent
        self.required = required
        super().__init__(
            f"exponent {exponent} is not a multiple of {required}; conjugates are "
            f"only exact for multiples of {required}"
        )


class IntegralityError(RayInvError):
    def __init__(self, degree, residual, imag=None):
        self.degree = degree
        self.residual = residual
        self.imag = imag
        msg = f"coefficient of degree {degree} is not integral (residual {residual})"
        if imag is not None:
            msg += f", imaginary part {imag}"
        super().__init__(msg)


class LevelMismatchError(RayInvError, ValueError):
    pass


class ConsistencyError(RayInvError):
    pass
