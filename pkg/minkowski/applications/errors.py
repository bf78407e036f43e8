"""
Exception hierarchy for the geometry layer.

Everything raised on purpose by ``minkowski.applications`` derives from
GeometryError, so callers (views, management commands) can map the whole
family onto a response or an exit status in one place.
"""


class GeometryError(ValueError):
    """Base class for all geometry-layer failures."""


class DomainError(GeometryError):
    """
    An operation was called outside its mathematical domain.

    Constructors that validate inputs name the offending argument in field.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class InconsistentGradientError(GeometryError):
    """A gradient does not belong to any boundary point of the body."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DegenerateHullError(GeometryError):
    """Hull input spans no area."""


class DegenerateQueryError(GeometryError):
    """A proximity query without a usable center ray."""


class EvaluationError(GeometryError):
    """A residual evaluated to a non-finite value."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class BoundaryCloudError(GeometryError):
    """A boundary point could not be computed for one grid parameter."""

    def __init__(self, message, phi=None):
        super().__init__(message)
        self.phi = phi


class UnsupportedDimensionError(GeometryError):
    """The requested operation does not exist in this dimension."""


class BodyFormatError(GeometryError):
    """A body or scene description is malformed."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
