"""Exception hierarchy shared by all modules."""


class ExtGiniError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ExtGiniError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InsufficientSampleError(DomainError):
    """The sample has fewer observations than the subset size requires."""


class DegenerateSampleError(DomainError):
    """The sample cannot support the statistic (all zero, no dispersion, ...)."""


class ParseError(DomainError):
    """A data file could not be parsed."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class CapacityError(ExtGiniError):
    """A brute-force routine was asked to do more work than its guard allows."""


class NumericError(ExtGiniError, ArithmeticError):
    """A numerical procedure failed to reach its tolerance.

    ``estimate`` and ``error`` hold the best partial answer, when there is one.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
