"""Exception types shared across the package."""


class HdxError(Exception):
    """Base class for all package-specific errors."""


class PurityError(HdxError):
    """Maximal faces of mixed dimension, or a face not contained in any top cell."""


class DimensionError(HdxError):
    """Operation applied at an invalid dimension."""


class MissingFaceError(HdxError, KeyError):
    """A face was requested that is not in the complex."""


class ExactnessUnavailable(HdxError):
    """Exhaustive certification would exceed the configured size cap."""

    def __init__(self, message: str, size: int = 0, cap: int = 0):
        super().__init__(message)
        self.size = size
        self.cap = cap


class SizeCapError(HdxError):
    """Exhaustive partition search would exceed the vertex-count cap."""


class RegularityError(HdxError):
    """A graph operation that requires k-regularity got an irregular graph."""


class RangeError(HdxError, ValueError):
    """Scalar argument outside its admissible interval."""


class UnknownTypeError(HdxError, KeyError):
    """Unrecognised affine Weyl type symbol."""


class DivisibilityError(HdxError):
    """Partition model requires (d+1) to divide n."""


class AbortedGreedy(HdxError):
    """Greedy design stage ran out of legal cells before reaching its target."""


class NotInL200Error(HdxError):
    """Input function is not orthogonal to the constants (and sign function)."""


class DegenerateSimplexError(HdxError):
    """Affinely degenerate simplex where a proper one was required."""
