"""Exception types raised across the package."""


class InvalidMetricError(ValueError):
    """A matrix that should be symmetric positive definite is not."""


class DegenerateError(ArithmeticError):
    """The two characteristic roots coincide and the Jordan basis collapses."""


class NearDegenerateError(ArithmeticError):
    """The Jordan basis exists but is too ill-conditioned to trust."""


class ContourFailure(ArithmeticError):
    """The contour quadrature did not converge or hit a root on the path."""


class InconsistentData(ValueError):
    """Boundary data cannot come from any admissible parameter set."""
