"""Exceptions raised when a computation hits a singular point of the geometry.

Each class carries a short ``tag`` used by the command-line front end to label
rows that could not be evaluated.
"""


class GeometryError(ArithmeticError):
    """Base class for physics singularities (not for malformed input)."""

    tag = "error"


class CriticalPointError(GeometryError):
    """A gapless mode or a point on the critical set was encountered."""

    tag = "critical-point"


class DegeneracyError(GeometryError):
    """The ground state is (numerically) degenerate, so the ground-state map is ill-defined."""

    tag = "degenerate"

    def __init__(self, message, gap=None):
        super().__init__(message)
        self.gap = gap


class LevelCrossingError(DegeneracyError):
    """Eigenvectors at neighbouring parameter values cannot be matched adiabatically."""


class BranchError(GeometryError):
    """The matrix logarithm is ambiguous (eigenvalue at -1 or a branch jump)."""

    tag = "branch"


class ParitySectorError(BranchError):
    """An orthogonal matrix with determinant -1 was passed where SO(L) is required."""
