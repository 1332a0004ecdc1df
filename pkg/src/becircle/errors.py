"""Exception types shared across the package."""


class BECircleError(Exception):
    """Base class for all package errors."""


class DomainError(BECircleError):
    """Argument outside the mathematical domain of an operation."""


class NoPositiveSolution(BECircleError):
    """No positive Dirichlet solution exists (eps at or above the existence threshold)."""


class NonConvergence(BECircleError):
    """Iterative solver failed to reach its tolerance."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class SingularJacobian(BECircleError):
    """Tridiagonal Newton step broke down."""


class SingularSystem(BECircleError):
    """Discrete linearized operator numerically singular; contradicts the no-kernel property."""


class TruncationError(BECircleError):
    """Right-hand side fails the decay required on the truncated half-line domain."""


class ArcTooShort(BECircleError):
    """A circle arc is too short to carry a one-signed minimizer at this eps."""

    def __init__(self, message, arc=None):
        super().__init__(message)
        self.arc = arc


class NotCritical(BECircleError):
    """Second-variation machinery invoked on a non-critical node configuration."""
