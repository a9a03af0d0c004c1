"""Exception hierarchy for the geometry engine."""


class GeometryError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(GeometryError):
    """An operation was called with inputs violating its stated precondition."""


class TangencyError(GeometryError):
    """A vector that must be tangent to the sphere (or the product) is not."""


class DomainError(GeometryError):
    """A chart parameter lies outside the usable part of the chart domain."""


class EvaluationError(GeometryError):
    """A chart evaluation produced a non-finite value."""


class SingularChartError(GeometryError):
    """The differential of a chart is rank deficient at the requested point."""

    def __init__(self, msg, smallest_singular_value=None):
        super().__init__(msg)
        self.smallest_singular_value = smallest_singular_value


class DegenerateSpectrumError(GeometryError):
    """Two principal curvatures collide where distinct ones are required."""


class FrameContinuityError(GeometryError):
    """A principal frame could not be propagated continuously over a stencil."""
