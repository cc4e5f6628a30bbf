"""Exception types shared across the package."""


class ExforError(Exception):
    """Base class for all errors raised by this package."""


class MalformedNumber(ExforError, ValueError):
    """A non-blank numeric field could not be parsed under either the
    standard or the E-less Fortran exponent convention."""


class PathThroughScalar(ExforError, TypeError):
    """A path update tried to descend through a scalar value."""


class JsonSyntaxError(ExforError, ValueError):
    """Input text is not valid JSON."""


class QueryError(ExforError, ValueError):
    """A query object cannot be compiled into predicates."""


class UnsupportedOperator(QueryError):
    """The query uses a ``$``-operator outside the supported subset."""


class CorruptLine(ExforError):
    """A stored line did not parse back as a JSON document."""


class StoreError(ExforError):
    """Store I/O failed; ``report`` carries the partial ingest progress."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
