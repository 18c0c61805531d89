"""Exception hierarchy shared by every module of the package."""


class GeometryError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(GeometryError, ValueError):
    """Array shapes disagree with each other or with the chart dimension."""


class UnsupportedDimensionError(GeometryError, ValueError):
    """The requested operation is not defined in this dimension."""


class NotPositiveDefiniteError(GeometryError, ValueError):
    """A matrix handed in as a Riemannian metric failed Cholesky factorisation."""


class DomainError(GeometryError, ValueError):
    """A point (or a finite-difference stencil around it) left the chart domain."""


class DegenerateVelocityError(GeometryError, ValueError):
    """Velocity has (numerically) zero length."""


class ConstraintDriftError(GeometryError, ValueError):
    """Arc-length state violates |U| = 1 or C . U = 0 beyond tolerance."""


class PoleError(GeometryError, ValueError):
    """A parameter or sphere point sits on a pole of the map being evaluated."""


class DegenerateLineError(GeometryError, ValueError):
    """Circle-only quantity requested for the straight-line (beta = 0) case."""


class OutOfRangeError(GeometryError, ValueError):
    """Parameter outside the range where the formula is meaningful."""
