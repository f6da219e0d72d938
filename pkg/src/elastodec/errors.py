"""Exception hierarchy shared by the numerical modules and the CLI."""


class ElastodecError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ElastodecError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class OrderOverflowError(ElastodecError, ValueError):
    """Requested order exceeds the configured cap or overflows double range."""


class MultipoleIndexError(ElastodecError, IndexError):
    """Multipole index (n, m) is invalid for the requested operation."""


class PreconditionError(ElastodecError, ValueError):
    """Inputs violate a documented precondition (e.g. non-orthogonal pair)."""


class DegenerateModeError(ElastodecError, ArithmeticError):
    """A per-mode linear system is singular or a denominator vanishes."""

    def __init__(self, message: str, n: int | None = None, m: int | None = None):
        super().__init__(message)
        self.n = n
        self.m = m


class RegularityError(ElastodecError, ValueError):
    """A surface parametrization is degenerate at the queried parameter."""


class SamplingError(ElastodecError, ValueError):
    """A mesh neighbourhood has too few samples for a local fit."""


class GridError(ElastodecError, ValueError):
    """Two sampled patterns do not share the same quadrature grid."""

