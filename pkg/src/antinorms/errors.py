"""Exception types shared across the package."""


class AntinormError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(AntinormError):
    pass


class NegativeCoordinateError(AntinormError):
    pass


class InfeasibleSeedError(AntinormError):
    """A construction seed produces a chain leaving the orthant or missing the axis."""


class DegenerateBodyError(AntinormError):
    """A conic body is empty or an iteration degenerated."""


class NotSelfDualError(AntinormError):
    """An operation requiring self-duality found a witness against it."""


class ThetaRangeError(AntinormError):
    """Requested area parameter lies outside the achievable range."""
