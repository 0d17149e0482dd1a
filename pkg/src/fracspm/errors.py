"""Exception types shared across the package."""


class FracSpmError(Exception):
    """Base class for all package errors."""


class ConfigurationError(FracSpmError, ValueError):
    """Invalid problem, basis or penalty configuration."""


class DomainError(FracSpmError, ValueError):
    """Argument outside the domain where a function is defined."""


class PoleError(DomainError):
    """Gamma function evaluated at a non-positive integer."""


class SingularMatrixError(FracSpmError, ArithmeticError):
    """LU factorization hit a (numerically) zero pivot."""


class ConvergenceError(FracSpmError, ArithmeticError):
    """An iterative kernel failed to converge."""
