"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid numerical or run configuration (bad grid, empty sample, bad quadrature range)."""


class BoundaryCase(ValueError):
    """The negative-flow predicate is undefined or numerically indistinguishable from equality."""


class UndefinedAngle(ValueError):
    """Major-axis angle requested for a circular contour (eps == 0)."""


class OutOfDomain(ValueError):
    """Angle arguments outside the interval where the angle-form condition applies."""


class UndefinedArrival(ValueError):
    """Classical arrival time requested for a packet with zero mean momentum."""
