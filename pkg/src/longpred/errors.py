"""Exception types shared across the package."""


class DomainError(ValueError):
    """Parameter outside the mathematical domain of an operation."""


class NotPositiveDefiniteError(ValueError):
    """A covariance sequence failed a positive-definiteness check."""

    def __init__(self, order, message=None):
        self.order = order
        super().__init__(
            message
            or f"covariance sequence is not positive definite at order {order}"
        )


class AccuracyError(RuntimeError):
    """A numeric routine could not meet its accuracy target.

    ``achieved`` carries the best relative error bound the routine could
    certify before giving up.
    """

    def __init__(self, message, achieved=None):
        self.achieved = achieved
        super().__init__(message)


class InternalConsistencyError(RuntimeError):
    """Two supposedly equivalent computations disagreed beyond tolerance."""


class EstimationError(RuntimeError):
    """An estimator failed on the given sample."""


class StatisticalPowerError(ValueError):
    """A Monte Carlo configuration is too small to support its conclusion."""
