"""Exact sampling moments of the ridge estimator under a known truth.

For the linear model y = X beta + eps with eps ~ N(0, sigma2 * I) and a
fixed design, the estimator beta_hat(lam) is a linear map of y, so its
mean, covariance, and mean squared error have closed forms in the
singular values of X. Everything here evaluates those closed forms from
a ThinSvd; nothing is estimated from data. sigma2 is always an explicit
input, never backed out of residuals.

Spectral forms used throughout (d_j, u_j, v_j from the thin SVD, r = rank):

* E[beta_hat]   = sum_j v_j * d_j^2/(d_j^2+lam) * (v_j' beta)
* Var[beta_hat] = sigma2 * sum_j v_j v_j' * d_j^2/(d_j^2+lam)^2
* tr Var        = sigma2 * sum_j d_j^2/(d_j^2+lam)^2
* ||bias||^2    = sum_{j<=r} [lam^2/(d_j^2+lam)^2 - 1] (v_j' beta)^2
                  + ||beta||^2

The bias form charges the full squared norm of beta's component outside
the row space without materializing a p x p eigenbasis, which matters
when p >> n.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import SingularDesignError
from .linalg import ThinSvd


@dataclass(frozen=True)
class GroundTruth:
    """Known coefficients and noise variance of the generating model."""

    beta_true: np.ndarray
    sigma2: float

    def __post_init__(self):
        beta = linalg.as_vector(self.beta_true, "beta_true")
        object.__setattr__(self, "beta_true", beta)
        sigma2 = float(self.sigma2)
        if not (sigma2 > 0.0 and np.isfinite(sigma2)):
            raise ValueError(f"sigma2 must be positive and finite, got {sigma2}")
        object.__setattr__(self, "sigma2", sigma2)


@dataclass(frozen=True)
class MomentsReport:
    """Bias, variance, and mean squared error of beta_hat at one penalty.

    ``mse`` is computed as ``bias_sq + var_trace`` so the decomposition
    holds exactly. ``mse_ols`` is the unpenalized reference
    sigma2 * sum_j 1/d_j^2, present only when X has full column rank.
    """

    lam: float
    mean: np.ndarray
    bias_sq: float
    var_trace: float
    mse: float
    mse_ols: float | None = None


def _check_lambda(lam) -> float:
    lam = float(lam)
    if not (np.isfinite(lam) and lam >= 0.0):
        raise ValueError(f"lambda must be finite and >= 0, got {lam}")
    return lam


def _check_truth(svd: ThinSvd, gt: GroundTruth) -> GroundTruth:
    if gt.beta_true.size != svd.shape[1]:
        raise ValueError(
            f"beta_true has length {gt.beta_true.size}, design has "
            f"{svd.shape[1]} columns"
        )
    return gt


def _require_full_rank(svd: ThinSvd, what: str) -> None:
    p = svd.shape[1]
    if svd.rank < p:
        raise SingularDesignError(
            f"{what} requires full column rank; rank {svd.rank} < p = {p}"
        )


def expectation_ridge(svd: ThinSvd, gt: GroundTruth, lam) -> np.ndarray:
    """E[beta_hat(lam)], the shrunken projection of beta onto the row space.

    At lam = 0 with full column rank this is beta itself (OLS is
    unbiased). Components of beta orthogonal to the row space map to 0
    for every lam.
    """
    gt = _check_truth(svd, gt)
    lam = _check_lambda(lam)
    d2 = svd.d**2
    vb = svd.v.T @ gt.beta_true
    return svd.v @ (d2 / (d2 + lam) * vb)


def variance_ridge(svd: ThinSvd, gt: GroundTruth, lam) -> np.ndarray:
    """Var[beta_hat(lam)] as a dense p x p symmetric PSD matrix.

    lam = 0 is allowed only with full column rank, where the usual OLS
    covariance sigma2 * (X'X)^-1 results.
    """
    gt = _check_truth(svd, gt)
    lam = _check_lambda(lam)
    if lam == 0.0:
        _require_full_rank(svd, "variance at lambda = 0")
    d2 = svd.d**2
    weights = gt.sigma2 * d2 / (d2 + lam) ** 2
    return (svd.v * weights) @ svd.v.T


def variance_trace(svd: ThinSvd, gt: GroundTruth, lam) -> float:
    """tr Var[beta_hat(lam)] = sigma2 * sum_j d_j^2/(d_j^2+lam)^2."""
    gt = _check_truth(svd, gt)
    lam = _check_lambda(lam)
    d2 = svd.d**2
    return float(gt.sigma2 * np.sum(d2 / (d2 + lam) ** 2))


def variance_dominance_gap(svd: ThinSvd, gt: GroundTruth, lam) -> np.ndarray:
    """Var[beta_hat(0)] - Var[beta_hat(lam)], PSD for every lam >= 0.

    Penalizing never inflates the covariance: the gap's eigenvalues are
    sigma2 * (1/d_j^2 - d_j^2/(d_j^2+lam)^2) >= 0. Requires full column
    rank so the OLS covariance exists; lam = 0 gives the zero matrix.
    """
    gt = _check_truth(svd, gt)
    lam = _check_lambda(lam)
    _require_full_rank(svd, "the variance comparison with OLS")
    d2 = svd.d**2
    # Factored form of 1/d^2 - d^2/(d^2+lam)^2: no cancellation, exact 0 at lam = 0.
    weights = gt.sigma2 * lam * (lam + 2.0 * d2) / (d2 * (d2 + lam) ** 2)
    return (svd.v * weights) @ svd.v.T


def bias_squared(svd: ThinSvd, gt: GroundTruth, lam) -> float:
    """||E[beta_hat(lam)] - beta||^2 via the row-space decomposition.

    Splits beta into its row-space part, shrunk by lam / (d_j^2 + lam)
    per component, and a null-space part the estimator can never reach.
    Both terms are sums of squares, so the result is zero exactly when
    lam = 0 and the design has full column rank.
    """
    gt = _check_truth(svd, gt)
    lam = _check_lambda(lam)
    d2 = svd.d**2
    vb = svd.v.T @ gt.beta_true
    inside = float(np.sum((lam / (d2 + lam)) ** 2 * vb**2))
    if svd.rank == svd.shape[1]:
        return inside
    leftover = gt.beta_true - svd.v @ vb
    return inside + float(leftover @ leftover)


def mse_ridge(svd: ThinSvd, gt: GroundTruth, lam) -> MomentsReport:
    """Full moment report at one penalty: mean, bias_sq, var_trace, mse."""
    gt = _check_truth(svd, gt)
    lam = _check_lambda(lam)
    bias_sq = bias_squared(svd, gt, lam)
    var_tr = variance_trace(svd, gt, lam)
    mse_ols = None
    if svd.rank == svd.shape[1]:
        mse_ols = float(gt.sigma2 * np.sum(1.0 / svd.d**2))
    return MomentsReport(
        lam=lam,
        mean=expectation_ridge(svd, gt, lam),
        bias_sq=bias_sq,
        var_trace=var_tr,
        mse=bias_sq + var_tr,
        mse_ols=mse_ols,
    )


def mse_curve(svd: ThinSvd, gt: GroundTruth, lambdas) -> np.ndarray:
    """MSE at each grid value; vectorized over the grid."""
    gt = _check_truth(svd, gt)
    grid = linalg.as_vector(lambdas, "lambdas")
    if np.any(grid < 0.0):
        raise ValueError("penalty grid must be nonnegative")
    d2 = svd.d[:, None] ** 2
    lam = grid[None, :]
    vb2 = (svd.v.T @ gt.beta_true) ** 2
    bias = np.sum((lam**2 / (d2 + lam) ** 2 - 1.0) * vb2[:, None], axis=0)
    bias = np.maximum(0.0, bias + gt.beta_true @ gt.beta_true)
    var = gt.sigma2 * np.sum(d2 / (d2 + lam) ** 2, axis=0)
    return bias + var


def mse_slope_at_zero(svd: ThinSvd, gt: GroundTruth) -> float:
    """Exact dMSE/dlam at 0 with full column rank: -2 sigma2 sum 1/d_j^4.

    Strictly negative for any sigma2 > 0, which is why some positive
    penalty always beats OLS on mean squared error.
    """
    gt = _check_truth(svd, gt)
    _require_full_rank(svd, "the MSE slope at lambda = 0")
    return float(-2.0 * gt.sigma2 * np.sum(1.0 / svd.d**4))


def mse_improvement_exists(svd: ThinSvd, gt: GroundTruth, lambdas):
    """Grid-minimize MSE(lam) and certify improvement over OLS.

    Returns ``(lambda_star, mse_star)``, the grid minimizer (ties toward
    the larger penalty). Before returning, verifies two facts and raises
    if either fails: the minimum is strictly below MSE(0), and the
    centered finite-difference slope of MSE at 0 (step 1e-6) is negative.
    A failure of the first means the grid does not reach small enough
    penalties.
    """
    gt = _check_truth(svd, gt)
    _require_full_rank(svd, "comparing against MSE at lambda = 0")
    grid = linalg.as_vector(lambdas, "lambdas")
    if np.any(grid <= 0.0):
        raise ValueError("penalty grid must be strictly positive")
    order = np.argsort(grid)[::-1]
    curve = mse_curve(svd, gt, grid[order])
    best = int(np.argmin(curve))
    lambda_star = float(grid[order][best])
    mse_star = float(curve[best])
    mse_zero = float(mse_curve(svd, gt, np.array([0.0]))[0])
    if not mse_star < mse_zero:
        raise ValueError(
            f"grid minimum {mse_star} does not improve on MSE(0) = {mse_zero}; "
            "extend the grid toward smaller penalties"
        )
    step = 1e-6
    lo = _mse_signed(svd, gt, -step)
    hi = _mse_signed(svd, gt, step)
    slope = (hi - lo) / (2.0 * step)
    if not slope < 0.0:
        raise ValueError(f"MSE slope at lambda = 0 is {slope}, expected < 0")
    return lambda_star, mse_star


def _mse_signed(svd: ThinSvd, gt: GroundTruth, lam: float) -> float:
    """MSE formula continued to small negative lam (|lam| < d_min^2 only).

    Exists solely so the centered difference at 0 can straddle the
    origin; callers guarantee the step stays tiny.
    """
    d2 = svd.d**2
    if lam <= -d2.min():
        raise ValueError("step too large for a centered difference at 0")
    vb = svd.v.T @ gt.beta_true
    bias = np.sum((lam / (d2 + lam)) ** 2 * vb**2)
    if svd.rank < svd.shape[1]:
        leftover = gt.beta_true - svd.v @ vb
        bias += leftover @ leftover
    var = gt.sigma2 * np.sum(d2 / (d2 + lam) ** 2)
    return float(bias + var)
