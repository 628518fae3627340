"""Exception hierarchy shared by all modules."""


class InvolutError(Exception):
    """Base class for every error raised by this package."""


class ContractViolation(InvolutError, ValueError):
    """An argument violates an operation's precondition."""


class ParameterError(ContractViolation):
    """Invalid model parameters (for instance a >= b)."""


class DomainError(ContractViolation):
    """Argument outside the domain of a function."""


class UnsupportedOrderError(ContractViolation):
    pass


class NonInvertibleError(InvolutError, ZeroDivisionError):
    """A series has no multiplicative or compositional inverse."""


class PoleError(InvolutError, ZeroDivisionError):
    """A term of an exact sum hits a vanishing denominator."""

    def __init__(self, message, term=None):
        super().__init__(message)
        self.term = term


class ConvergenceError(InvolutError, ArithmeticError):
    """A series did not reach the requested tolerance.

    ``partial`` carries the best result obtained before giving up.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class AccuracyError(InvolutError, ArithmeticError):
    """Quadrature or summation failed to certify the requested tolerance."""

    def __init__(self, message, estimate=None, error_estimate=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate
