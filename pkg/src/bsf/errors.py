"""Exception types shared across the package."""


class BsfError(Exception):
    """Base class for all library errors."""


class DimensionError(BsfError, ValueError):
    """Inputs disagree in dimension or count."""


class InvalidIndexError(BsfError, ValueError):
    """A multi-index is malformed for the stated degree."""


class FaceError(BsfError, ValueError):
    """A face (objective subset) is empty or out of range."""


class BarycentricError(BsfError, ValueError):
    """A vector is too far from the standard simplex to repair."""


class DomainError(BsfError, ValueError):
    """A decision vector lies outside the problem's box bounds."""


class ParseError(BsfError, ValueError):
    """A sample file is malformed; the message carries the line number."""


class InsufficientDataError(BsfError, RuntimeError):
    """A fit step has no sample points to work with."""


class InsufficientFrontError(BsfError, RuntimeError):
    """A generated front has fewer points than requested."""
