"""Exception hierarchy shared by every module."""


class GWError(Exception):
    """Base class for all library errors."""


class InvalidDimension(GWError, ValueError):
    pass


class InvalidInput(GWError, ValueError):
    pass


class InvalidAlgebra(GWError, ValueError):
    """Structure constants violate antisymmetry, Jacobi, or the supplied Gram."""


class NotCompactSemisimple(InvalidAlgebra):
    """Negative Killing form is not positive definite."""


class AlgebraMismatch(GWError, ValueError):
    pass


class InvalidDescriptor(GWError, ValueError):
    pass


class UnknownSpace(GWError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown space"


class InvalidMetric(GWError, ValueError):
    pass


class ZeroVector(GWError, ValueError):
    pass


class SupportError(GWError, ValueError):
    """A vector has components outside the subspace an operation requires."""


class UnsupportedSpace(GWError, ValueError):
    pass
