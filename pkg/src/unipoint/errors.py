"""Exception types shared across the package."""


class UnipointError(Exception):
    """Base class for all package errors."""


class GeneralPositionError(UnipointError, ValueError):
    """Raised on coincident points or collinear triples."""


class CoordinateRangeError(UnipointError, ValueError):
    """Raised when a coordinate is too large for overflow-free determinants."""


class MalformedFileError(UnipointError, ValueError):
    """Raised when a binary input file does not match its declared layout."""


class PlanarCodeError(MalformedFileError):
    """Raised on malformed planar_code input; carries the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class InvalidEmbeddingError(UnipointError, ValueError):
    """Raised when a rotation system is not a triangulated sphere."""


class UnflippableEdgeError(UnipointError, ValueError):
    """Raised when flipping an edge would create a multi-edge."""


class DomainError(UnipointError, ValueError):
    """Raised when an argument lies outside an operation's domain."""


class ConstraintError(UnipointError):
    """Raised when an obstruction family violates its degree constraints."""
