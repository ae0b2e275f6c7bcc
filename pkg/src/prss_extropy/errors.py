"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations

__all__ = [
    "AccuracyError",
    "ConfigurationError",
    "DivergenceError",
    "DomainError",
    "MCFailureError",
    "MonotonicityError",
    "ParameterDomainError",
    "UnsupportedFamilyError",
]


class ParameterDomainError(ValueError):
    """A constructor or operation received a parameter outside its domain."""


class DomainError(ParameterDomainError):
    """An evaluation point (u, rank, ...) lies outside the admissible range."""


class MonotonicityError(ParameterDomainError):
    """A user-supplied transform is not strictly increasing on its grid."""


class ConfigurationError(ValueError):
    """Malformed JSON descriptor or run configuration."""


class UnsupportedFamilyError(ValueError):
    """A closed form was requested for a family/weight pair that has none."""


class AccuracyError(ArithmeticError):
    """Quadrature failed to reach the requested tolerance.

    The best estimate found before giving up is kept on the exception so
    callers can still report it.
    """

    def __init__(self, message: str, estimate: float = float("nan"), error: float = float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class DivergenceError(AccuracyError, ParameterDomainError):
    """The requested integral is infinite (e.g. a non-positive gamma argument)."""

    def __init__(self, message: str):
        AccuracyError.__init__(self, message, float("nan"), float("inf"))


class MCFailureError(ArithmeticError):
    """A Monte Carlo stratum estimate is unusable (e.g. non-positive under a non-negative weight)."""
