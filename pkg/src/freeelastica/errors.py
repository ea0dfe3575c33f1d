"""Exception hierarchy."""


class FreeElasticaError(Exception):
    """Base class for all package errors."""


class DomainError(FreeElasticaError, ValueError):
    """An argument lies outside the domain of the operation."""


class DivergenceError(DomainError):
    """The requested quantity is infinite (e.g. K(1))."""


class InputError(FreeElasticaError, ValueError):
    """Malformed or non-finite input data."""


class CurveError(InputError):
    """A sampled curve violates the arclength-curve invariants."""


class GenericityError(FreeElasticaError):
    """A curve passes through the origin after its first node."""


class UndefinedDiskError(FreeElasticaError):
    """Osculating disk requested where the curvature vanishes."""


class PreconditionError(FreeElasticaError):
    """A numerically checked precondition does not hold."""


class InconsistencyError(FreeElasticaError):
    """Internal cross-checks disagree beyond tolerance."""


class AssemblyError(FreeElasticaError):
    """An assembled obstacle solution violates a required invariant."""
