"""Shared exception types for the haar_digits package."""


class DomainError(ValueError):
    """Input lies outside the mathematical domain of an operation."""


class ConvergenceError(RuntimeError):
    """An iterative routine exhausted its budget before converging.

    Carries the best available estimate so callers can inspect how far the
    computation got.
    """

    def __init__(self, message, best_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate


class ConsistencyError(RuntimeError):
    """Two supposedly-equal evaluation routes disagreed beyond tolerance."""
