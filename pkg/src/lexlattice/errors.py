"""Exception types shared across the package."""


class EmptyDocumentError(ValueError):
    """Raised when an operation requires a non-empty document."""


class CoverageError(Exception):
    """Raised when the input text does not cover the requested terms."""


class AlignmentError(CoverageError):
    """Raised when a keyword alignment does not cover a required term."""
