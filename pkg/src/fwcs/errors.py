"""Exception hierarchy shared by every module of the package."""


class FWCSError(Exception):
    """Base class for all errors raised by :mod:`fwcs`."""


class ParameterError(FWCSError, ValueError):
    """Malformed parameter lists or parameter files."""


class DomainError(FWCSError, ValueError):
    """Argument outside the mathematical domain of a primitive."""


class DivergenceError(FWCSError):
    """The requested series does not converge at the given argument."""


class TruncationError(FWCSError):
    """The term budget was exhausted before the tolerance was reached."""


class SingularDeformationError(FWCSError, ZeroDivisionError):
    """The deformation function at zero has a vanishing denominator."""


class UnsupportedContourError(FWCSError):
    """Mellin-Barnes evaluation requested outside the supported orders."""


class QuadratureError(FWCSError):
    """A quadrature rule failed to reach its tolerance."""
