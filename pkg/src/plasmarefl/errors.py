"""Exception hierarchy shared by the solver modules."""


class PlasmaReflError(Exception):
    """Base class for all solver errors."""


class ParameterError(PlasmaReflError, ValueError):
    """Invalid input parameters (non-finite, out of range, on a branch cut)."""


class ConvergenceError(PlasmaReflError):
    """An iterative solver did not reach its tolerance."""


class QuadratureError(ConvergenceError):
    """Adaptive quadrature hit its subdivision limit.

    The best available estimate is kept on the exception so the caller can
    decide whether it is good enough.
    """

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class WindingError(PlasmaReflError):
    """Argument tracking of G(tau) failed, typically near the curve L."""


class ModeAbsentError(PlasmaReflError):
    """No plasma-mode zero exists for the requested parameters."""


class DegenerateDenominatorError(PlasmaReflError):
    """The amplitude-ratio denominator cancels to within rounding."""
