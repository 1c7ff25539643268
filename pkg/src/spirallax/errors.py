"""Exception taxonomy shared by all modules."""


class SpiralError(Exception):
    """Base class for all errors raised by this package."""


class InvalidN(SpiralError):
    """Vertex count outside the admissible range (n >= 5, n % 3 != 1)."""


class DegenerateConfiguration(SpiralError):
    """A geometric construction collapsed (coincident points, parallel lines)."""


class SingularMatrix(SpiralError):
    """A matrix that must be invertible is numerically singular."""


class NotLiftable(SpiralError):
    """The unit-determinant rescaling system is singular (n = 3s + 1)."""


class IllConditioned(SpiralError):
    """A solve succeeded but its verification residual exceeds tolerance."""


class GenericityViolation(SpiralError):
    """A coordinate that appears as a divisor is numerically zero."""


class IndexOutOfRange(SpiralError):
    """An index falls outside the window or table where a value is defined."""


class NonDivisible(SpiralError):
    """Exact Laurent division left a residual above tolerance."""
