"""Exception types raised across the package."""


class EWNMFError(Exception):
    """Base class for all package errors."""


class DimensionError(EWNMFError, ValueError):
    """Operand shapes do not conform."""


class DomainError(EWNMFError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConstraintError(EWNMFError, ValueError):
    """A structural constraint (e.g. column-stochastic weights) is violated."""


class ConfigurationError(EWNMFError, ValueError):
    """Invalid run or experiment configuration."""


class NumericalError(EWNMFError, ArithmeticError):
    """A non-finite value appeared during iteration."""

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration


class ParseError(EWNMFError, ValueError):
    """Malformed input file."""
