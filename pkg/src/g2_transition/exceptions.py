"""Errors raised by the g2_transition package."""


class BundleError(ValueError):
    """Base class for every domain error in this package."""

    def __init__(self: "BundleError", message: str, *, residual: float | None = None) -> None:
        """Create a new error with an optional measured residual."""
        super().__init__(message)
        self.residual = residual


class PreconditionError(BundleError):
    """An argument is outside the range an operation accepts."""


class ZeroDivisorError(BundleError):
    """An octonion is too close to zero to be inverted."""


class OrthogonalityViolationError(BundleError):
    """A triple does not satisfy the orthogonality conditions for an automorphism."""

    def __init__(self: "OrthogonalityViolationError", message: str, *, condition: str, residual: float) -> None:
        """Create a new error naming the failed condition."""
        super().__init__(message, residual=residual)
        self.condition = condition


class NotInnerAutomorphismError(BundleError):
    """Conjugation by an octonion is not an automorphism."""


class TangencyViolationError(BundleError):
    """A vector is not tangent to the sphere at the base point."""


class PoleSingularityError(BundleError):
    """A point is at, or numerically too near, the excluded pole of a chart."""


class ChartViolationError(BundleError):
    """A point lies outside the domain of a chart."""


class NotOnEquatorError(BundleError):
    """A point of the six-sphere is not on the equator x2 = 0."""


class NonUnitaryError(BundleError):
    """A complex 3x3 matrix is not in SU(3)."""


class FiberMismatchError(BundleError):
    """A fiber coordinate cannot be reconstructed from an automorphism."""


class DomainViolationError(BundleError):
    """An octonion is outside the subspace an operation is defined on."""


class NotUnitError(BundleError):
    """A point does not have unit norm."""


class SingularJacobianError(BundleError):
    """A Jacobian determinant is too small to have a reliable sign."""
