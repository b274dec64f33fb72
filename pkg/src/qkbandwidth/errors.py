"""Exception types raised across the package."""


class QKError(Exception):
    """Base class for all package errors."""


class ValidationError(QKError, ValueError):
    """Invalid argument shape, range or content."""


class CapacityError(ValidationError):
    """Requested object exceeds the supported size."""


class RegularizationError(QKError, ValueError):
    """A singular matrix was inverted without regularization."""


class ParseError(ValidationError):
    """Malformed input file."""

    def __init__(self, message, row=None, col=None):
        loc = []
        if row is not None:
            loc.append(f"row {row}")
        if col is not None:
            loc.append(f"column {col}")
        if loc:
            message = f"{message} ({', '.join(loc)})"
        super().__init__(message)
        self.row = row
        self.col = col


class SchemaError(QKError, ValueError):
    """A results file does not have the expected columns."""
