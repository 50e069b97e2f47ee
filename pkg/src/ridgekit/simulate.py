"""Synthetic Gaussian designs and Monte-Carlo experiments.

Every output is a pure function of (config, seed). Randomness comes from
numpy's default_rng (PCG64 with ziggurat normal sampling); the design is
drawn from the stream keyed [seed, 0] and replicate r draws its noise
from [seed, 1 + r], so each replicate is reproducible in isolation and
running replicates concurrently cannot change any number.

The named presets reproduce, at desk scale, the qualitative behavior of
ridge under collinearity: "collinear-sign-flip" (a coefficient path that
crosses zero under strong positive correlation with opposite-signed true
coefficients) and "variance-shrinkage" (analytic vs empirical moments as
the penalty grows).
"""

from dataclasses import dataclass, replace
from pathlib import Path
from time import perf_counter

import numpy as np

from . import dataio, estimator, figures, linalg, moments
from .moments import GroundTruth


@dataclass(frozen=True)
class SimConfig:
    """One simulation scenario: design law, truth, noise, grid, seed."""

    n: int
    p: int
    structure: str
    correlation: float
    beta_true: np.ndarray
    sigma: float
    replicates: int
    seed: int
    lambdas: np.ndarray

    def __post_init__(self):
        if self.n < 2 or self.p < 1:
            raise ValueError(f"need n >= 2 and p >= 1, got ({self.n}, {self.p})")
        design_covariance(self)  # validates structure and correlation range
        beta = linalg.as_vector(self.beta_true, "beta_true")
        if beta.size != self.p:
            raise ValueError(f"beta_true has length {beta.size}, expected {self.p}")
        object.__setattr__(self, "beta_true", beta)
        if not (float(self.sigma) > 0.0 and np.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive and finite, got {self.sigma}")
        object.__setattr__(self, "sigma", float(self.sigma))
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        grid = linalg.as_vector(self.lambdas, "lambdas")
        if np.any(grid < 0.0):
            raise ValueError("penalty grid must be nonnegative")
        if grid.size > 1 and np.any(np.diff(grid) >= 0.0):
            raise ValueError("penalty grid must be strictly decreasing")
        object.__setattr__(self, "lambdas", grid)

    def ground_truth(self) -> GroundTruth:
        return GroundTruth(beta_true=self.beta_true, sigma2=self.sigma**2)


@dataclass(frozen=True)
class McMomentsResult:
    """Empirical vs analytic moments of beta_hat at one penalty."""

    lam: float
    empirical_mean: np.ndarray
    empirical_var_diag: np.ndarray
    analytic_mean: np.ndarray
    analytic_var_diag: np.ndarray
    replicates: int


def equicorrelation_covariance(p: int, rho: float) -> np.ndarray:
    """Unit-variance covariance with constant off-diagonal rho.

    Positive definite exactly when -1/(p-1) < rho < 1 (eigenvalues
    1 + (p-1)rho and 1 - rho).
    """
    rho = float(rho)
    if p > 1 and not -1.0 / (p - 1) < rho < 1.0:
        raise ValueError(
            f"equicorrelation needs -1/(p-1) = {-1.0 / (p - 1):.6g} < rho < 1, "
            f"got {rho}"
        )
    cov = np.full((p, p), rho)
    np.fill_diagonal(cov, 1.0)
    return cov


def ar1_covariance(p: int, phi: float) -> np.ndarray:
    """Covariance phi^|i-j|, positive definite for |phi| < 1."""
    phi = float(phi)
    if not -1.0 < phi < 1.0:
        raise ValueError(f"ar1 needs |phi| < 1, got {phi}")
    idx = np.arange(p)
    return phi ** np.abs(idx[:, None] - idx[None, :])


def design_covariance(cfg: SimConfig) -> np.ndarray:
    if cfg.structure == "equicorrelation":
        return equicorrelation_covariance(cfg.p, cfg.correlation)
    if cfg.structure == "ar1":
        return ar1_covariance(cfg.p, cfg.correlation)
    raise ValueError(
        f"unknown structure {cfg.structure!r}; use 'equicorrelation' or 'ar1'"
    )


def gen_design(cfg: SimConfig) -> np.ndarray:
    """n i.i.d. rows from N(0, Sigma); stream keyed [seed, 0]."""
    rng = np.random.default_rng([cfg.seed, 0])
    z = rng.standard_normal((cfg.n, cfg.p))
    factor = linalg.cholesky_spd(design_covariance(cfg))
    return z @ factor.T


def gen_response(x, gt: GroundTruth, seed) -> np.ndarray:
    """y = X beta + eps with eps ~ N(0, sigma2 I), deterministic in seed."""
    x = linalg.as_matrix(x, "x")
    if gt.beta_true.size != x.shape[1]:
        raise ValueError(
            f"beta_true has length {gt.beta_true.size}, x has {x.shape[1]} columns"
        )
    rng = np.random.default_rng(seed)
    return x @ gt.beta_true + np.sqrt(gt.sigma2) * rng.standard_normal(x.shape[0])


def mc_moments(cfg: SimConfig) -> list[McMomentsResult]:
    """Hold the design fixed, redraw noise R times, compare moments.

    Returns one result per grid penalty. The empirical variance uses the
    n - 1 denominator.
    """
    x = gen_design(cfg)
    svd = linalg.thin_svd(x)
    gt = cfg.ground_truth()
    uy = np.empty((svd.rank, cfg.replicates))
    for r in range(cfg.replicates):
        y = gen_response(x, gt, [cfg.seed, 1 + r])
        uy[:, r] = svd.u.T @ y
    results = []
    for lam in cfg.lambdas:
        shrink = svd.d / (svd.d**2 + lam)
        betas = svd.v @ (shrink[:, None] * uy)
        results.append(
            McMomentsResult(
                lam=float(lam),
                empirical_mean=betas.mean(axis=1),
                empirical_var_diag=betas.var(axis=1, ddof=1),
                analytic_mean=moments.expectation_ridge(svd, gt, lam),
                analytic_var_diag=np.diagonal(
                    moments.variance_ridge(svd, gt, lam)
                ).copy(),
                replicates=cfg.replicates,
            )
        )
    return results


def path_experiment(cfg: SimConfig, out_dir) -> tuple[Path, Path]:
    """One draw, full path: CSV of (lambda, coefficients, df, loocv) + SVG.

    The grid must be strictly positive (the loocv column needs it) and at
    least 20 points long so the path shape is visible.
    """
    if cfg.lambdas.size < 20:
        raise ValueError(f"path grid needs >= 20 points, got {cfg.lambdas.size}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    x = gen_design(cfg)
    y = gen_response(x, cfg.ground_truth(), [cfg.seed, 1])
    svd = linalg.thin_svd(x)
    path = estimator.solution_path(svd, y, cfg.lambdas, with_loocv=True)
    csv_path = out / "path.csv"
    header = ["lambda"] + [f"beta_{j + 1}" for j in range(cfg.p)] + ["df", "loocv"]
    rows = [
        [path.lambdas[g], *path.betas[:, g], path.dfs[g], path.loocv[g]]
        for g in range(path.lambdas.size)
    ]
    dataio.write_csv(csv_path, header, rows)
    svg_path = figures.coefficient_path_figure(
        path.lambdas, path.betas, out / "path.svg"
    )
    return csv_path, svg_path


_PRESETS = {
    "collinear-sign-flip": dict(
        n=20,
        p=2,
        structure="equicorrelation",
        correlation=0.95,
        beta_true=np.array([2.0, -2.0]),
        sigma=1.0,
        replicates=1,
        seed=7,
        lambdas=np.geomspace(1e3, 1e-3, 61),
    ),
    "variance-shrinkage": dict(
        n=50,
        p=5,
        structure="equicorrelation",
        correlation=0.8,
        beta_true=np.ones(5),
        sigma=1.0,
        replicates=5000,
        seed=11,
        lambdas=np.geomspace(1e2, 1e-2, 25),
    ),
}


def preset_names() -> list[str]:
    return sorted(_PRESETS)


def preset(name: str, seed: int | None = None, replicates: int | None = None) -> SimConfig:
    """A named scenario; seed and replicate count may be overridden."""
    if name not in _PRESETS:
        raise ValueError(f"unknown preset {name!r}; available: {preset_names()}")
    cfg = SimConfig(**_PRESETS[name])
    if seed is not None:
        cfg = replace(cfg, seed=seed)
    if replicates is not None:
        cfg = replace(cfg, replicates=replicates)
    return cfg


def route_benchmark(
    sizes,
    grid,
    out,
    seed: int = 0,
    measured_primal: int = 1,
    measured_dual: int = 3,
) -> list[dict]:
    """Wall-clock comparison: one shared-SVD path vs per-penalty refits.

    The path route is timed in full (SVD included). Primal and dual
    routes are timed on the first ``measured_*`` grid penalties and
    extrapolated linearly to the whole grid, since a full primal sweep at
    p >> n scales would take minutes; the measured counts are recorded in
    the table. Results go to ``out`` as CSV and come back as dicts.
    """
    grid = estimator.validate_lambda_grid(grid)
    if measured_primal < 1 or measured_dual < 1:
        raise ValueError("measured fit counts must be >= 1")
    header = [
        "n",
        "p",
        "grid_size",
        "path_seconds",
        "dual_fits_measured",
        "dual_seconds_per_fit",
        "dual_seconds_total",
        "primal_fits_measured",
        "primal_seconds_per_fit",
        "primal_seconds_total",
        "primal_over_path_ratio",
    ]
    rows = []
    for n, p in sizes:
        rng = np.random.default_rng([seed, n, p])
        x = rng.standard_normal((n, p))
        y = rng.standard_normal(n)

        t0 = perf_counter()
        svd = linalg.thin_svd(x)
        estimator.solution_path(svd, y, grid)
        path_s = perf_counter() - t0

        m_dual = min(measured_dual, grid.size)
        t0 = perf_counter()
        for lam in grid[:m_dual]:
            estimator.fit_dual(x, y, lam)
        dual_per = (perf_counter() - t0) / m_dual

        m_primal = min(measured_primal, grid.size)
        t0 = perf_counter()
        for lam in grid[:m_primal]:
            estimator.fit_primal(x, y, lam)
        primal_per = (perf_counter() - t0) / m_primal

        rows.append(
            [
                n,
                p,
                grid.size,
                path_s,
                m_dual,
                dual_per,
                dual_per * grid.size,
                m_primal,
                primal_per,
                primal_per * grid.size,
                primal_per * grid.size / path_s,
            ]
        )
    dataio.write_csv(out, header, rows)
    return [dict(zip(header, row)) for row in rows]
