"""Exception types shared across the package."""


class ModelError(Exception):
    """Base class for every error raised by oscket."""


class DomainError(ModelError, ValueError):
    """An argument lies outside the domain of the operation."""


class NumericalError(ModelError, ArithmeticError):
    """An iterative routine failed to converge."""


class InsufficientDataError(ModelError):
    """A Monte Carlo estimator had no events to condition on."""
