"""Exception types raised across the package."""


class DegenerateDataError(ValueError):
    """Data cannot define a normalizer or a fit (e.g. all-zero voltages)."""


class DimensionError(ValueError):
    """Vector lengths do not match."""


class AlignmentError(ValueError):
    """Two curves are not keyed on the same displacements."""


class DatasetParseError(ValueError):
    """A dataset file could not be parsed.

    ``row`` is the 1-based line number in the file (header is line 1),
    or ``None`` when the problem is not tied to a single row.
    """

    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class Q18RangeError(OverflowError):
    """A value does not fit the finite range of the 18-bit float format."""


class LookupMissError(KeyError):
    """Input voltage is not one of the lookup-table keys."""


class DuplicateKeyError(ValueError):
    """Two lookup-table entries share the same voltage."""
