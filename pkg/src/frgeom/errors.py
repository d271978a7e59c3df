"""Exception hierarchy. Everything derives from ``ValueError`` so callers can
catch bad input generically."""


class GeometryError(ValueError):
    """Base class for all errors raised by frgeom."""


class MeshMismatchError(GeometryError):
    """Operands live on different quadrature meshes."""


class InvalidDensityError(GeometryError):
    """Values violate positivity or the mass constraint."""


class DomainError(GeometryError):
    """Input lies outside the domain where an operation is defined."""


class DegenerateError(GeometryError):
    """Coincident or otherwise degenerate configuration (e.g. mu == mu1)."""
