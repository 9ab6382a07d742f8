"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so keep the hierarchy flat and
stable: ParseError for malformed files, InputError for bad arguments or
shapes, NumericError for numerical breakdown inside an algorithm.
"""


class FsvdError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(FsvdError):
    """A file could not be parsed. Carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InputError(FsvdError):
    """Arguments violate a documented precondition (shape, range, emptiness)."""


class MetricUndefinedError(InputError):
    """A metric is undefined for the given inputs (e.g. single-class labels)."""


class NumericError(FsvdError):
    """Numerical failure: non-finite values or a degenerate decomposition."""


class DegenerateInputError(NumericError):
    """All singular values fell below the drop tolerance."""
