"""Exception types shared across the package."""


class HydroshockError(Exception):
    """Base class for all package errors."""


class DomainError(HydroshockError):
    """Parameters outside the admissible range (0 < F < 2, 0 < H_R < 1)."""


class SingularityError(HydroshockError):
    """Evaluation requested at or too close to the sonic point H_s."""


class IntegrationError(HydroshockError):
    """Profile or mode integration failed to meet its tolerance."""

    def __init__(self, message, worst_x=None, worst_residual=None):
        super().__init__(message)
        self.worst_x = worst_x
        self.worst_residual = worst_residual


class DerivationError(HydroshockError):
    """Two independent derivations of the same quantity disagree."""


class ZeroOnContourError(HydroshockError):
    """A determinant sample on the contour fell below the zero threshold."""


class BranchAmbiguityError(HydroshockError):
    """Square-root discriminant vanished; branch cannot be selected."""
