"""Exception types shared across the toolkit."""


class RidgeKitError(Exception):
    """Base class for all toolkit errors."""


class NotPositiveDefiniteError(RidgeKitError):
    """Cholesky factorization hit a non-positive pivot.

    The 1-based index of the failing pivot is available as ``pivot``.
    """

    def __init__(self, pivot: int):
        self.pivot = pivot
        super().__init__(
            f"matrix is not positive definite: non-positive pivot at index {pivot}"
        )


class SvdConvergenceError(RidgeKitError):
    """The iterative SVD did not converge within its sweep budget."""

    def __init__(self, sweeps: int, worst_ratio: float, shape: tuple):
        self.sweeps = sweeps
        self.worst_ratio = worst_ratio
        self.shape = shape
        super().__init__(
            f"one-sided Jacobi SVD of a {shape[0]}x{shape[1]} matrix did not "
            f"converge after {sweeps} sweeps (worst off-diagonal ratio "
            f"{worst_ratio:.3e})"
        )


class SingularDesignError(RidgeKitError):
    """The unpenalized normal equations are singular; a positive penalty is needed."""


class DataError(RidgeKitError):
    """Malformed or unusable input data (CSV parsing, standardization)."""
