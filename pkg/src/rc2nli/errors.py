"""Exception types shared across the package.

Everything user-fixable (bad input files, malformed records, coverage
mismatches) derives from ValidationError so the CLI can map it to exit
code 2, keeping exit code 1 for genuine I/O failures.
"""


class ValidationError(Exception):
    pass


class DatasetError(ValidationError):
    """Malformed dataset record or file."""


class ConlluError(ValidationError):
    pass


class ConlluFormatError(ConlluError):
    """Line-level format problem (column count, bad ids)."""


class ConlluStructureError(ConlluError):
    """Tree-level problem (roots, cycles, head ranges)."""


class AnnotationError(ValidationError):
    """Bad annotation CSV content."""


class CoverageError(ValidationError):
    """Prediction/annotation ids do not cover the dataset exactly."""
