"""Exception types raised across the package."""


class FreeMeixnerError(Exception):
    """Base class for all package errors."""


class ZeroConstantTerm(FreeMeixnerError, ZeroDivisionError):
    pass


class NonzeroInnerConstant(FreeMeixnerError, ValueError):
    pass


class NotInvertible(FreeMeixnerError, ValueError):
    pass


class ReversionFailure(FreeMeixnerError, ValueError):
    pass


class NotPositiveDefinite(FreeMeixnerError, ValueError):
    """A leading Hankel determinant is negative.

    ``index`` is the size of the first failing Hankel matrix.
    """

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"Hankel determinant of size {index} is negative")


class FinitelySupported(FreeMeixnerError, ValueError):
    pass


class InsufficientMoments(FreeMeixnerError, ValueError):
    pass


class InsufficientParameters(FreeMeixnerError, ValueError):
    pass


class DegreeViolation(FreeMeixnerError, ValueError):
    pass


class NoEigenfunction(FreeMeixnerError, ArithmeticError):
    def __init__(self, degree, message=None):
        self.degree = degree
        super().__init__(message or f"no monic eigenfunction of degree {degree}")


class InvalidC(FreeMeixnerError, ValueError):
    pass


class NoOperator(FreeMeixnerError, ValueError):
    pass


class DegenerateJacobi(FreeMeixnerError, ValueError):
    pass


class IntegrationFailure(FreeMeixnerError, RuntimeError):
    def __init__(self, error_estimate, message=None):
        self.error_estimate = error_estimate
        super().__init__(message or f"integration error estimate {error_estimate:.3g} above tolerance")


class AtomPresent(FreeMeixnerError, ValueError):
    pass


class RankTooLarge(FreeMeixnerError, ValueError):
    pass


class SingularSum(FreeMeixnerError, ArithmeticError):
    pass


class EdgeSingularity(FreeMeixnerError, ValueError):
    """The density blows up at a support edge (a root of ``p`` sits there)."""
