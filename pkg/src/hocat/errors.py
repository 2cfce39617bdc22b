"""Exception types shared across the package."""


class HocatError(Exception):
    """Base class for every error raised by this package."""


class FormatError(HocatError):
    """Malformed input document: bad structure, duplicate or dangling names."""


class ValidationError(HocatError):
    """Well-formed data that violates a required law or precondition."""


class MoveError(HocatError):
    """A zigzag rewrite move that does not apply at the requested position."""
