"""Penalty selection: grids, K-fold CV, and both leave-one-out routes.

The leave-one-out shortcut divides residuals by (1 - leverage) and never
refits; loocv_bruteforce is the definitional n-refits procedure kept as
its oracle. kfold_cv with k = n reproduces brute force bit for bit: both
fill a per-observation squared-error table and average it in row order,
and both train through fit_auto on the identical row subsets.
"""

from dataclasses import dataclass

import numpy as np

from . import estimator, linalg
from .errors import SingularDesignError
from .estimator import RidgeFit
from .linalg import ThinSvd

# Relative slack within which two CV errors count as tied.
_TIE_REL = 1e-12


@dataclass(frozen=True)
class LambdaGrid:
    """Strictly decreasing positive penalties plus how they were made."""

    values: np.ndarray
    generation: str


@dataclass(frozen=True)
class CvReport:
    """Per-penalty prediction error and the selected penalty.

    ``errors[g]`` is the mean of squared held-out errors across all n
    observations at ``lambdas[g]`` (not a mean of fold means; the two
    differ when folds are unequal). ``fold_assignment[i]`` records which
    fold held out observation i; both fold fields are None for the
    leave-one-out methods.
    """

    lambdas: np.ndarray
    errors: np.ndarray
    method: str
    selected: float
    fold_sizes: tuple | None = None
    fold_assignment: np.ndarray | None = None


def as_grid(grid) -> np.ndarray:
    """Accept a LambdaGrid or a raw array; return validated values."""
    if isinstance(grid, LambdaGrid):
        return grid.values
    return estimator.validate_lambda_grid(grid)


def make_log_grid(lo: float, hi: float, count: int) -> LambdaGrid:
    """Geometrically spaced penalties from hi down to lo, endpoints exact."""
    lo = float(lo)
    hi = float(hi)
    if not (0.0 < lo < hi and np.isfinite(hi)):
        raise ValueError(f"need 0 < lo < hi, got ({lo}, {hi})")
    if count < 2:
        raise ValueError(f"count must be >= 2, got {count}")
    return LambdaGrid(values=np.geomspace(hi, lo, count), generation="log_spaced")


def explicit_grid(values) -> LambdaGrid:
    return LambdaGrid(values=estimator.validate_lambda_grid(values), generation="explicit")


def _select(lambdas: np.ndarray, errors: np.ndarray) -> float:
    """Smallest error wins; ties within 1e-12 relative go to the largest
    penalty (the grid is stored largest first)."""
    best = errors.min()
    tied = errors <= best * (1.0 + _TIE_REL)
    return float(lambdas[np.argmax(tied)])


def select_lambda(report: CvReport) -> float:
    """Re-derive the selected penalty from a report's error curve."""
    return _select(report.lambdas, report.errors)


def _kfold_grid(grid) -> np.ndarray:
    """K-fold tolerates a trailing 0 in the grid; LOOCV never does."""
    if isinstance(grid, LambdaGrid):
        return grid.values
    g = linalg.as_vector(grid, "lambdas")
    if np.any(g < 0.0):
        raise ValueError("penalty grid must be nonnegative")
    if g.size > 1 and np.any(np.diff(g) >= 0.0):
        raise ValueError("penalty grid must be strictly decreasing")
    return g


def kfold_cv(x, y, grid, k: int, seed: int) -> CvReport:
    """K-fold cross-validation with a seed-deterministic partition.

    Rows are shuffled once by the seed, then cut into k contiguous
    blocks whose sizes differ by at most one. Each fold's complement is
    fit with fit_auto at every grid penalty. The same seed gives a
    bit-identical report.
    """
    x = linalg.as_matrix(x, "x")
    y = linalg.as_vector(y, "y")
    n = x.shape[0]
    if y.size != n:
        raise ValueError(f"y has length {y.size}, x has {n} rows")
    grid = _kfold_grid(grid)
    if not 2 <= k <= n:
        raise ValueError(f"k must be in [2, {n}], got {k}")
    perm = np.random.default_rng(seed).permutation(n)
    sizes = np.full(k, n // k)
    sizes[: n % k] += 1
    assignment = np.empty(n, dtype=int)
    errs = np.empty((n, grid.size))
    start = 0
    for fold, size in enumerate(sizes):
        test = perm[start : start + size]
        start += size
        assignment[test] = fold
        train = np.ones(n, dtype=bool)
        train[test] = False
        x_tr, y_tr = x[train], y[train]
        for g, lam in enumerate(grid):
            try:
                fit = estimator.fit_auto(x_tr, y_tr, lam)
            except SingularDesignError as exc:
                raise SingularDesignError(
                    f"fold {fold} cannot be fit at lambda = {lam}: {exc}; "
                    "use a strictly positive grid"
                ) from exc
            # Score rows one at a time so k = n reproduces the brute-force
            # leave-one-out numbers bit for bit.
            for i in test:
                errs[i, g] = (y[i] - x[i] @ fit.beta) ** 2
    errors = errs.mean(axis=0)
    return CvReport(
        lambdas=grid,
        errors=errors,
        method=f"kfold(k={k}, seed={seed})",
        selected=_select(grid, errors),
        fold_sizes=tuple(int(s) for s in sizes),
        fold_assignment=assignment,
    )


def loocv_shortcut(svd: ThinSvd, y, grid) -> CvReport:
    """Leave-one-out error from one shared SVD, no refits.

    err(lam) = mean_i [(y_i - yhat_i) / (1 - H_ii)]^2. Cost is
    O(rank * (n + p)) per grid value. Raises when any leverage reaches 1.
    """
    y = linalg.as_vector(y, "y")
    grid = as_grid(grid)
    errors = estimator._press_curve(svd, y, grid)
    return CvReport(
        lambdas=grid,
        errors=errors,
        method="loocv_shortcut",
        selected=_select(grid, errors),
    )


def loocv_bruteforce(x, y, grid) -> CvReport:
    """Definitional leave-one-out: n refits per grid value.

    The oracle the shortcut is certified against; quadratic cost, meant
    for desk-scale data and tests.
    """
    x = linalg.as_matrix(x, "x")
    y = linalg.as_vector(y, "y")
    n = x.shape[0]
    if y.size != n:
        raise ValueError(f"y has length {y.size}, x has {n} rows")
    if n < 3:
        raise ValueError(f"need n >= 3 observations, got {n}")
    grid = as_grid(grid)
    errs = np.empty((n, grid.size))
    for i in range(n):
        train = np.arange(n) != i
        x_tr, y_tr = x[train], y[train]
        for g, lam in enumerate(grid):
            fit = estimator.fit_auto(x_tr, y_tr, lam)
            errs[i, g] = (y[i] - x[i] @ fit.beta) ** 2
    errors = errs.mean(axis=0)
    return CvReport(
        lambdas=grid,
        errors=errors,
        method="loocv_bruteforce",
        selected=_select(grid, errors),
    )


def information_criterion(fit: RidgeFit, n: int, kind: str) -> float:
    """AIC or BIC from the fit's residual sum of squares and df.

    n * log(rss / n) + 2 * df for "aic", log(n) * df for "bic"; lower is
    better. Undefined at zero residual.
    """
    if kind not in ("aic", "bic"):
        raise ValueError(f"kind must be 'aic' or 'bic', got {kind!r}")
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not fit.residual_ss > 0.0:
        raise ValueError("information criterion undefined at zero residual")
    penalty = 2.0 if kind == "aic" else np.log(n)
    return float(n * np.log(fit.residual_ss / n) + penalty * fit.df)
