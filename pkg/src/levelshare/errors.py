"""Exception types raised by the public API.

Everything raised for bad data or bad parameters derives from
:class:`DataError`, so callers (and the CLI) can distinguish input
problems from genuine runtime failures.
"""


class DataError(ValueError):
    """Invalid input data or parameters."""


class NegativeValueError(DataError):
    """A value that must be nonnegative is negative."""


class NonFiniteValueError(DataError):
    """A value is NaN or infinite."""


class ZeroTotalError(DataError):
    """A series total is zero where a positive total is required."""


class ZeroWeightError(DataError):
    """A negative weight exponent met a zero base and the policy is to fail."""


class EmptyAfterSkipError(DataError):
    """Every unit was skipped by the zero-weight policy."""


class UnknownMeasureError(DataError):
    """Requested named measure does not exist."""


class ParseError(DataError):
    """A dataset or config file failed to parse.

    ``row`` is the 1-based data row number when applicable.
    """

    def __init__(self, message: str, row: "int | None" = None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


class DuplicateIdError(ParseError):
    """A unit identifier appears more than once."""


class InvalidParametersError(DataError):
    """Parameters violate their documented constraints."""


class DegenerateInputError(DataError):
    """Input is degenerate for the requested computation."""
