"""Exception and warning types shared by all modules."""


class GWrightError(Exception):
    """Base class for every error raised by the package."""


class DomainError(GWrightError, ValueError):
    """Argument outside the domain of the function (poles, non-positive scale...)."""


class ParameterError(GWrightError, ValueError):
    """One or more parameter constraints are violated.

    ``problems`` lists every violated constraint, one human readable line each.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class ConvergenceError(GWrightError, RuntimeError):
    """An iterative procedure hit its cap; ``best_estimate`` holds the last value."""

    def __init__(self, message, best_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate


class UnsupportedRegimeError(GWrightError, ValueError):
    """Parameters are valid but outside the regime this implementation handles."""


class StateError(GWrightError, RuntimeError):
    """Object used before the state it needs was built (e.g. sampler table)."""


class ConditioningError(GWrightError, ArithmeticError):
    """Numerically singular linear algebra (e.g. Hankel moment matrix)."""


class PrecisionWarning(UserWarning):
    """Result is likely to have lost accuracy through cancellation."""


class ConstructionError(GWrightError, RuntimeError):
    """A derived object (sampler table) could not be built."""
