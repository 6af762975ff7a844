"""Exception hierarchy shared by all modules."""


class VirialAnsatzError(Exception):
    """Base class for package errors."""


class InvalidArgumentError(VirialAnsatzError, ValueError):
    """An argument violates a documented precondition."""


class ConvexityError(InvalidArgumentError):
    """The potential is not symmetric strictly convex."""


class AccuracyError(VirialAnsatzError):
    """Adaptive quadrature did not reach the requested tolerance.

    ``estimate`` and ``error`` hold the best value found and its error bound.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class DomainError(VirialAnsatzError):
    """A truncation or grid domain could not be established.

    ``suggested_half_width`` is set when a larger domain would likely work.
    """

    def __init__(self, message, suggested_half_width=None):
        super().__init__(message)
        self.suggested_half_width = suggested_half_width


class NumericalBreakdownError(VirialAnsatzError):
    """Loss of precision made a construction step meaningless."""


class NotFoundError(VirialAnsatzError):
    """A requested root or bracket does not exist on the searched range."""
