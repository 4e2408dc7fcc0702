"""Exception types shared across the package."""


class CmAtlasError(Exception):
    """Base class for all package-specific errors."""


class DomainError(CmAtlasError, ValueError):
    """Argument lies outside the domain of the requested function."""


class OrderError(CmAtlasError, ValueError):
    """Requested derivative/polygamma order is not supported."""


class DegenerateParameterError(CmAtlasError, ValueError):
    """Parameters collapse a family to a degenerate case (e.g. s == t)."""


class QuadratureError(CmAtlasError, RuntimeError):
    """Adaptive quadrature failed to meet its tolerance."""


class EvalOverflowError(CmAtlasError, OverflowError):
    """A value is too large to represent; use the logarithmic form instead."""


class BracketError(CmAtlasError, ValueError):
    """Bisection bracket endpoints classify identically."""
