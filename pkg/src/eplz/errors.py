"""Exception types shared across the package."""


class EplzError(Exception):
    """Base class for all package-specific errors."""


class InvalidDimensionError(EplzError):
    """Raised when a spin space with fewer than two levels is requested."""


class DegenerateSpinorError(EplzError):
    """Raised when a coherent state is requested for the zero spinor."""


class NotUnimodularError(EplzError):
    """Raised when a 2x2 matrix handed to the lift has determinant != 1."""


class NoEPError(EplzError):
    """Raised when exceptional-point data is requested from the Hermitian model."""


class NearEPError(EplzError):
    """Raised when an eigensystem is requested too close to an exceptional point.

    The diagonalizing similarity transformation diverges there; use the
    dedicated exceptional-point data instead.
    """

    def __init__(self, t, t_ep, guard):
        self.t = t
        self.t_ep = t_ep
        self.guard = guard
        super().__init__(
            f"t={t} is within {guard} of the exceptional point at t={t_ep}; "
            "the eigensystem is not defined there (see ep_data)"
        )


class DegenerateNormalizationError(EplzError):
    """Raised when a transition matrix column sums to zero."""


class IntegrationFailureError(EplzError):
    """Raised when the adaptive integrator underflows its step size."""

    def __init__(self, t_last, message="step size underflow"):
        self.t_last = t_last
        super().__init__(f"{message} at t={t_last}")


class AsymptoteNotReachedError(EplzError):
    """Raised when span doubling fails to converge the asymptotic populations."""
