"""Exception hierarchy shared by all submodules."""


class SubmigError(Exception):
    """Base class for package errors."""


class ConfigError(SubmigError, ValueError):
    """Raised for unparseable or inconsistent run configurations."""


class SingularityError(SubmigError, ValueError):
    """Raised when a kernel is evaluated at a singular point (e.g. z = 0 for H0)."""


class DomainError(SubmigError, ValueError):
    """Raised when special-function arguments leave the supported range."""


class ResolutionError(SubmigError, ValueError):
    """Raised when a quadrature rule has no cells inside the object."""


class NumericalError(SubmigError, RuntimeError):
    """Raised when a numerical routine fails (non-finite input, no convergence)."""


class NoSignalError(NumericalError):
    """Raised when the scattering matrix carries no usable signal subspace."""


class MatrixFormatError(ConfigError):
    """Raised for malformed scattering-matrix files."""
