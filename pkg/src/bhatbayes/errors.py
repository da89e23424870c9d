"""Exception types shared across the package."""


class EstimationError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(EstimationError, ValueError):
    """Invalid input: bad shapes, out-of-range parameters, broken invariants."""


class DimensionMismatch(ValidationError):
    """Two probability vectors (or a vector and a matrix) disagree in dimension."""


class NumericError(EstimationError, ArithmeticError):
    """A computed quantity violated a numerical postcondition."""


class EigenConvergenceError(NumericError):
    """The Jacobi eigensolver failed to reach its off-diagonal tolerance."""

    def __init__(self, message, *, sweeps=None, off_diagonal=None, residual=None):
        super().__init__(message)
        self.sweeps = sweeps
        self.off_diagonal = off_diagonal
        self.residual = residual


class OptimizationError(NumericError):
    """An inner optimizer returned an unusable result."""


class UndefinedRatioError(NumericError, ZeroDivisionError):
    """A relative quantity was requested with a zero denominator."""
