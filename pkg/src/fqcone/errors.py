"""Exception types shared across the package."""


class FqconeError(Exception):
    """Base class for all package errors."""


class CompositeP(FqconeError):
    """Raised when the requested characteristic is not an odd prime."""


class BudgetExceeded(FqconeError):
    """Raised when a requested field or cone is too large for table construction."""


class ModelUnavailable(FqconeError):
    """Raised when a cone model is not linearly equivalent to the product cone at this q."""


class NotOnCone(FqconeError):
    """Raised when a point expected on the cone fails the membership predicate."""


class ZeroFunction(FqconeError):
    """Raised when a nonzero cone function is required."""


class PrincipalCharacter(FqconeError):
    """Raised when a non-principal character parameter is required but a = 0 was given."""


class NonUnimodular(FqconeError):
    """Raised when a unimodular (|f| = 1) function is required."""
