"""Ridge estimator routes, hat-matrix diagnostics, and the solution path.

Three equivalent ways to evaluate the coefficient vector for penalty
``lam``:

* primal: solve (X'X + lam*I) beta = X'y, a p x p system;
* dual:   beta = X' (XX' + lam*I)^-1 y, an n x n system, cheap when p >> n;
* svd:    spectral shrinkage of a precomputed thin SVD, cheapest when a
          whole penalty grid reuses one factorization.

All functions are pure; a shared ThinSvd can serve any number of
concurrent per-penalty evaluations.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import NotPositiveDefiniteError, SingularDesignError
from .linalg import ThinSvd

# (min diag L / max diag L)^2 below this counts as numerically singular at lam=0.
_SINGULAR_PIVOT_RATIO = 1e-12


@dataclass(frozen=True)
class RidgeFit:
    """One fitted penalty: coefficients, fitted values, and diagnostics."""

    lam: float
    beta: np.ndarray
    fitted: np.ndarray
    df: float
    route: str
    residual_ss: float


@dataclass(frozen=True)
class RidgePath:
    """Coefficients over a strictly decreasing penalty grid.

    ``betas`` has one column per grid value; ``dfs`` increase along the
    stored order. ``loocv`` holds per-penalty leave-one-out errors when the
    path was computed with them.
    """

    lambdas: np.ndarray
    betas: np.ndarray
    dfs: np.ndarray
    loocv: np.ndarray | None = None


def _check_lambda(lam, positive=False) -> float:
    lam = float(lam)
    if not np.isfinite(lam):
        raise ValueError("lambda must be finite")
    if positive:
        if lam <= 0.0:
            raise ValueError(f"lambda must be > 0, got {lam}")
    elif lam < 0.0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    return lam


def _check_xy(x, y):
    x = linalg.as_matrix(x, "x")
    y = linalg.as_vector(y, "y")
    if y.size != x.shape[0]:
        raise ValueError(f"y has length {y.size}, x has {x.shape[0]} rows")
    return x, y


def validate_lambda_grid(lambdas) -> np.ndarray:
    """A penalty grid must be strictly positive and strictly decreasing."""
    grid = linalg.as_vector(lambdas, "lambdas")
    if np.any(grid <= 0.0):
        raise ValueError("penalty grid must be strictly positive")
    if grid.size > 1 and np.any(np.diff(grid) >= 0.0):
        raise ValueError("penalty grid must be strictly decreasing")
    return grid


def _finish_fit(x, y, beta, lam, df, route) -> RidgeFit:
    fitted = x @ beta
    resid = y - fitted
    return RidgeFit(
        lam=lam,
        beta=beta,
        fitted=fitted,
        df=float(df),
        route=route,
        residual_ss=float(resid @ resid),
    )


def fit_primal(x, y, lam) -> RidgeFit:
    """Solve the p x p penalized normal equations (X'X + lam*I) beta = X'y.

    lam = 0 is allowed only when X'X is numerically nonsingular; otherwise a
    SingularDesignError advises a positive penalty.
    """
    x, y = _check_xy(x, y)
    lam = _check_lambda(lam)
    n, p = x.shape
    if lam == 0.0 and p > n:
        raise SingularDesignError(
            f"X'X is singular for p = {p} > n = {n}; use lambda > 0"
        )
    a = x.T @ x
    if lam > 0.0:
        a[np.diag_indices_from(a)] += lam
    try:
        factor = linalg.cholesky_spd(a)
    except NotPositiveDefiniteError as exc:
        if lam == 0.0:
            raise SingularDesignError(
                "X'X is numerically singular at lambda = 0 "
                f"(Cholesky failed at pivot {exc.pivot}); use lambda > 0"
            ) from exc
        raise
    diag = np.diagonal(factor)
    if lam == 0.0 and (diag.min() / diag.max()) ** 2 <= _SINGULAR_PIVOT_RATIO:
        raise SingularDesignError(
            "X'X is numerically singular at lambda = 0; use lambda > 0"
        )
    beta = linalg.solve_cholesky(factor, x.T @ y)
    if lam == 0.0:
        df = float(p)
    elif n <= p:
        # tr(H) via n right-hand sides, O(p^2 n), cheaper than p x p inversion.
        z = linalg.solve_cholesky(factor, x.T)
        df = float(np.einsum("ij,ji->", x, z))
    else:
        df = p - lam * linalg.trace_inverse_cholesky(factor)
    return _finish_fit(x, y, beta, lam, df, "primal")


def fit_dual(x, y, lam) -> RidgeFit:
    """Ridge via the n x n system: beta = X' (XX' + lam*I)^-1 y.

    Requires lam > 0; the gram matrix XX' alone is singular whenever the
    rows are dependent.
    """
    x, y = _check_xy(x, y)
    lam = _check_lambda(lam, positive=True)
    n = x.shape[0]
    k = x @ x.T
    k[np.diag_indices_from(k)] += lam
    factor = linalg.cholesky_spd(k)
    alpha = linalg.solve_cholesky(factor, y)
    beta = x.T @ alpha
    df = n - lam * linalg.trace_inverse_cholesky(factor)
    return _finish_fit(x, y, beta, lam, df, "dual")


def fit_svd(svd: ThinSvd, y, lam) -> RidgeFit:
    """Ridge from a thin SVD: shrink each spectral component by d/(d^2+lam).

    Directions outside the row space get coefficient zero. lam = 0 is
    allowed only when the rank equals the column count.
    """
    y = linalg.as_vector(y, "y")
    lam = _check_lambda(lam)
    n, p = svd.shape
    if y.size != n:
        raise ValueError(f"y has length {y.size}, design has {n} rows")
    if lam == 0.0 and svd.rank < p:
        raise SingularDesignError(
            f"lambda = 0 needs full column rank; rank {svd.rank} < p = {p}"
        )
    d2 = svd.d**2
    uy = svd.u.T @ y
    beta = svd.v @ (svd.d / (d2 + lam) * uy)
    fitted = svd.u @ (d2 / (d2 + lam) * uy)
    resid = y - fitted
    return RidgeFit(
        lam=lam,
        beta=beta,
        fitted=fitted,
        df=float(np.sum(d2 / (d2 + lam))),
        route="svd",
        residual_ss=float(resid @ resid),
    )


def fit_auto(x, y, lam) -> RidgeFit:
    """Dispatch to the cheaper route: primal when p <= n, dual otherwise."""
    x, y = _check_xy(x, y)
    lam = _check_lambda(lam)
    n, p = x.shape
    if p <= n:
        return fit_primal(x, y, lam)
    if lam == 0.0:
        raise SingularDesignError(
            f"X'X is singular for p = {p} > n = {n}; use lambda > 0"
        )
    return fit_dual(x, y, lam)


def solution_path(svd: ThinSvd, y, lambdas, with_loocv: bool = False) -> RidgePath:
    """Evaluate the whole penalty grid from one shared factorization.

    Per-grid-point work is O(rank * (n + p)). The grid must be strictly
    positive and strictly decreasing so the df column increases along the
    path.
    """
    y = linalg.as_vector(y, "y")
    grid = validate_lambda_grid(lambdas)
    n, _ = svd.shape
    if y.size != n:
        raise ValueError(f"y has length {y.size}, design has {n} rows")
    d2 = svd.d[:, None] ** 2
    uy = svd.u.T @ y
    shrink = d2 / (d2 + grid[None, :])
    betas = svd.v @ (shrink * (uy / svd.d)[:, None])
    dfs = shrink.sum(axis=0)
    loocv = _press_curve(svd, y, grid) if with_loocv else None
    return RidgePath(lambdas=grid, betas=betas, dfs=dfs, loocv=loocv)


def _press_curve(svd: ThinSvd, y, grid) -> np.ndarray:
    """Leave-one-out error per grid value via residual/(1 - leverage)."""
    d2 = svd.d[:, None] ** 2
    shrink = d2 / (d2 + grid[None, :])
    uy = svd.u.T @ y
    fitted = svd.u @ (shrink * uy[:, None])
    leverage = (svd.u**2) @ shrink
    margin = 1.0 - leverage
    bad = np.argwhere(margin <= 1e-12)
    if bad.size:
        i, g = bad[0]
        raise ValueError(
            f"leverage of observation {i} reaches 1 at grid index {g} "
            "(interpolating fit); leave-one-out error is undefined there"
        )
    ratios = (y[:, None] - fitted) / margin
    return np.mean(ratios**2, axis=0)


def hat_diagonal(svd: ThinSvd, lam) -> np.ndarray:
    """Diagonal of the smoother matrix X (X'X + lam*I)^-1 X'."""
    lam = _check_lambda(lam)
    weights = svd.d**2 / (svd.d**2 + lam)
    return (svd.u**2) @ weights


def degrees_of_freedom(d, lam) -> float:
    """Effective model dimension: sum of d_j^2 / (d_j^2 + lam)."""
    d = linalg.as_vector(d, "d")
    if np.any(d <= 0.0):
        raise ValueError("singular values must be strictly positive")
    lam = _check_lambda(lam)
    return float(np.sum(d**2 / (d**2 + lam)))


def constraint_radius(svd: ThinSvd, y, lam) -> float:
    """Squared coefficient norm ||beta(lam)||_2^2.

    This is the radius of the norm-ball constraint whose solution the
    penalty ``lam`` reproduces; it decreases strictly in lam when X'y != 0.
    """
    y = linalg.as_vector(y, "y")
    lam = _check_lambda(lam, positive=True)
    coefs = svd.d / (svd.d**2 + lam) * (svd.u.T @ y)
    return float(coefs @ coefs)


def lambda_for_constraint(svd: ThinSvd, y, c, bracket, tol: float = 1e-8) -> float:
    """Invert the penalty <-> radius map by bisection in log lambda.

    ``bracket`` = (lam_lo, lam_hi) must satisfy radius(lam_lo) > c >
    radius(lam_hi). Stops when |radius(lam) - c| <= tol * c; capped at 200
    bisections.
    """
    c = float(c)
    if not (c > 0.0 and np.isfinite(c)):
        raise ValueError(f"target radius must be positive and finite, got {c}")
    lo, hi = (float(b) for b in bracket)
    if not (0.0 < lo < hi):
        raise ValueError(f"bracket must satisfy 0 < lam_lo < lam_hi, got ({lo}, {hi})")
    r_lo = constraint_radius(svd, y, lo)
    r_hi = constraint_radius(svd, y, hi)
    if not (r_lo > c > r_hi):
        raise ValueError(
            f"bracket does not enclose the target: radius({lo}) = {r_lo}, "
            f"radius({hi}) = {r_hi}, target = {c}"
        )
    for _ in range(200):
        mid = float(np.sqrt(lo * hi))
        r_mid = constraint_radius(svd, y, mid)
        if abs(r_mid - c) <= tol * c:
            return mid
        if r_mid > c:
            lo = mid
        else:
            hi = mid
    raise ValueError(
        f"bisection did not reach |radius - c| <= {tol} * c in 200 iterations; "
        f"bracket shrank to ({lo}, {hi})"
    )


def predict(fit: RidgeFit, x_new) -> np.ndarray:
    """Linear predictions x_new @ beta (intercept handling lives in dataio)."""
    x_new = linalg.as_matrix(x_new, "x_new")
    if x_new.shape[1] != fit.beta.size:
        raise ValueError(
            f"x_new has {x_new.shape[1]} columns, fit has {fit.beta.size} coefficients"
        )
    return x_new @ fit.beta


def augmented_ols_oracle(x, y, lam) -> np.ndarray:
    """Ridge as plain least squares on a row-augmented system (test oracle).

    Appends sqrt(lam) * I rows to X and p zeros to y, then solves the
    augmented least-squares problem with an SVD-based routine. Independent
    of every fitting route above.
    """
    x, y = _check_xy(x, y)
    lam = _check_lambda(lam, positive=True)
    p = x.shape[1]
    x_aug = np.vstack([x, np.sqrt(lam) * np.eye(p)])
    y_aug = np.concatenate([y, np.zeros(p)])
    beta, *_ = np.linalg.lstsq(x_aug, y_aug, rcond=None)
    return beta
