"""Exception hierarchy.

``NoEventsError`` and its subclasses signal that a threshold produced no
events to estimate from. They are outcomes, not bugs, and the CLI turns them
into status rows instead of failures.
"""


class UpcrossError(Exception):
    """Base class for all package errors."""


class DomainError(UpcrossError, ValueError):
    """Input values outside the domain of an operation."""


class ThresholdRangeError(UpcrossError, ValueError):
    """Order-statistic index out of range for the series length."""


class ParseError(UpcrossError, ValueError):
    """Malformed data file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NoEventsError(UpcrossError):
    """No events at the requested threshold."""


class NoUpcrossingsError(NoEventsError):
    pass


class NoRunsError(NoEventsError):
    pass


class NoExceedancesError(NoEventsError):
    pass
