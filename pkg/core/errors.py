"""
Exception hierarchy for the geometry library.

Input problems subclass ValueError, numeric problems subclass ArithmeticError,
so callers (the CLI in particular) can map whole families to exit codes.
"""


class GeometryError(Exception):
    """Base class of every error raised by the library."""


# ---------------- input errors ----------------

class InvalidCurve(GeometryError, ValueError):
    """A curve description does not define a valid closed convex curve."""


class NotConvex(InvalidCurve):
    """Support function fails the convexity condition h + h'' >= 0."""

    def __init__(self, message: str, theta: float | None = None, value: float | None = None):
        super().__init__(message)
        self.theta = theta
        self.value = value


class InvalidParameter(GeometryError, ValueError):
    pass


class IncompatibleMethod(GeometryError, ValueError):
    """Exact piecewise quadrature requested for curves that are not piecewise constant."""


class InvalidPartition(GeometryError, ValueError):

    def __init__(self, message: str, violations: list[str] | None = None):
        super().__init__(message)
        self.violations = violations or []


class ExtensionFailure(GeometryError, ValueError):
    pass


class DegenerateInstance(GeometryError, ValueError):
    pass


class DegenerateTriangle(GeometryError, ValueError):
    pass


class VerticesOutsideBody(GeometryError, ValueError):
    pass


# ---------------- numeric errors ----------------

class QuadratureFailure(GeometryError, ArithmeticError):
    """Adaptive integration did not reach the requested tolerance."""

    def __init__(self, message: str, estimate: float | None = None, error: float | None = None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class ConsistencyFailure(GeometryError, ArithmeticError):
    """Two independent evaluations of the same quantity disagree."""


class ConvergenceFailure(GeometryError, ArithmeticError):
    pass


class EulerMismatch(GeometryError, ArithmeticError):
    pass
