"""Exception hierarchy.

Validation problems (bad input shapes, off-surface points, malformed
documents) derive from :class:`ValidationError`; configurations that are
well-formed but geometrically degenerate derive from :class:`DegeneracyError`.
The CLI maps the two families to different exit codes.
"""


class UnyieldingError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(UnyieldingError, ValueError):
    """Input does not satisfy a precondition."""


class DimensionMismatch(ValidationError):
    pass


class InvalidDependence(ValidationError):
    pass


class UnsupportedDimension(ValidationError):
    pass


class TangencyViolation(ValidationError):
    pass


class SingularPair(ValidationError):
    pass


class DegeneracyError(UnyieldingError, ArithmeticError):
    """Geometry is too close to degenerate for the requested quantity."""


class GeneralPositionViolation(DegeneracyError):
    def __init__(self, message, subset=None):
        super().__init__(message)
        self.subset = tuple(subset) if subset is not None else None


class ZeroCoefficient(DegeneracyError):
    pass


class RootNearZero(DegeneracyError):
    pass


class DegenerateSimplex(DegeneracyError):
    pass


class DegenerateHyperplane(DegeneracyError):
    pass


class SignalTooSmall(DegeneracyError):
    pass


class SolverFailure(UnyieldingError, RuntimeError):
    """The LP backend returned something that cannot happen for a feasible problem."""
