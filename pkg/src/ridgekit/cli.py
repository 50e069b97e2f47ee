"""Batch command line: fit, path, cv, moments, simulate, bench.

Exit codes: 0 success, 1 data or math error, 2 usage error. Numbers in
CSV files carry 17 significant digits (round-trip safe); printed
summaries use 6. Every run is reproducible byte for byte given the same
flags and seed.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import dataio, estimator, figures, linalg, moments, selection, simulate
from .errors import RidgeKitError


def _float_list(text: str) -> np.ndarray:
    try:
        return np.array([float(tok) for tok in text.split(",") if tok.strip()])
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}")


def _size_list(text: str) -> list:
    sizes = []
    for token in text.split(","):
        try:
            n, p = token.lower().split("x")
            sizes.append((int(n), int(p)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"sizes look like 100x5000, got {token!r}")
    return sizes


def _add_data_flags(sp, transform: bool = True):
    sp.add_argument("--input", required=True, help="CSV file, one observation per row")
    sp.add_argument(
        "--response",
        required=True,
        help="response column name, or 0-based index with --no-header",
    )
    sp.add_argument(
        "--no-header", action="store_true", help="first row is data, not column names"
    )
    if transform:
        sp.add_argument(
            "--center",
            action=argparse.BooleanOptionalAction,
            default=True,
            help="center predictors and response before fitting",
        )
        sp.add_argument(
            "--scale",
            action=argparse.BooleanOptionalAction,
            default=False,
            help="scale predictors to unit sample standard deviation",
        )


def _add_grid_flags(sp, size: int = 50):
    sp.add_argument("--lambda-min", type=float, default=1e-3)
    sp.add_argument("--lambda-max", type=float, default=1e3)
    sp.add_argument("--grid-size", type=int, default=size)
    sp.add_argument(
        "--lambdas",
        type=_float_list,
        default=None,
        help="explicit decreasing penalty list; overrides the log-grid flags",
    )


def _grid(args) -> np.ndarray:
    if args.lambdas is not None:
        return estimator.validate_lambda_grid(args.lambdas)
    return selection.make_log_grid(args.lambda_min, args.lambda_max, args.grid_size).values


def _load(args, transform: bool = True):
    data = dataio.read_csv(
        args.input, has_header=not args.no_header, response_column=args.response
    )
    if not transform:
        return data, data, None
    std, scaler = dataio.standardize(data, center=args.center, scale=args.scale)
    return data, std, scaler


def cmd_fit(args) -> int:
    data, std, scaler = _load(args)
    fit = estimator.fit_auto(std.x, std.y, args.lam)
    beta, intercept = dataio.destandardize_coefficients(fit.beta, scaler)
    print(f"route        {fit.route}")
    print(f"lambda       {fit.lam:.6g}")
    print(f"df           {fit.df:.6g}")
    print(f"residual_ss  {fit.residual_ss:.6g}")
    print(f"intercept    {intercept:.6g}")
    print("coefficients (original scale):")
    width = max(len(name) for name in data.feature_names)
    for name, value in zip(data.feature_names, beta):
        print(f"  {name:<{width}}  {value:.6g}")
    return 0


def cmd_path(args) -> int:
    data, std, _ = _load(args)
    grid = _grid(args)
    svd = linalg.thin_svd(std.x)
    path = estimator.solution_path(svd, std.y, grid, with_loocv=args.loocv)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    header = ["lambda", *data.feature_names, "df"]
    columns = [path.lambdas, *path.betas, path.dfs]
    if args.loocv:
        header.append("loocv")
        columns.append(path.loocv)
    csv_path = out / "path.csv"
    dataio.write_csv(csv_path, header, list(zip(*columns)))
    svg_path = figures.coefficient_path_figure(
        path.lambdas, path.betas, out / "path.svg", labels=data.feature_names
    )
    print(f"wrote {csv_path}")
    print(f"wrote {svg_path}")
    print(f"df range     {path.dfs[0]:.6g} to {path.dfs[-1]:.6g}")
    return 0


def cmd_cv(args) -> int:
    data, std, _ = _load(args)
    grid = _grid(args)
    if args.method == "kfold":
        report = selection.kfold_cv(std.x, std.y, grid, k=args.k, seed=args.seed)
    elif args.method == "loocv":
        svd = linalg.thin_svd(std.x)
        report = selection.loocv_shortcut(svd, std.y, grid)
    else:
        report = selection.loocv_bruteforce(std.x, std.y, grid)
    print(f"method           {report.method}")
    print(f"selected lambda  {report.selected:.6g}")
    print(f"minimum cv error {report.errors.min():.6g}")
    if args.out_dir is not None:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = out / "cv.csv"
        dataio.write_csv(csv_path, ["lambda", "error"], list(zip(report.lambdas, report.errors)))
        svg_path = figures.cv_curve_figure(
            report.lambdas, report.errors, report.selected, out / "cv.svg"
        )
        print(f"wrote {csv_path}")
        print(f"wrote {svg_path}")
    return 0


def cmd_moments(args) -> int:
    data, _, _ = _load(args, transform=False)
    svd = linalg.thin_svd(data.x)
    truth = moments.GroundTruth(beta_true=args.beta_true, sigma2=args.sigma2)
    grid = _grid(args)
    reports = [moments.mse_ridge(svd, truth, lam) for lam in grid]
    print(f"{'lambda':>12} {'bias_sq':>12} {'var_trace':>12} {'mse':>12}")
    for rep in reports:
        print(f"{rep.lam:>12.6g} {rep.bias_sq:>12.6g} {rep.var_trace:>12.6g} {rep.mse:>12.6g}")
    if reports[0].mse_ols is not None:
        print(f"mse at lambda = 0 (OLS): {reports[0].mse_ols:.6g}")
    if args.out_dir is not None:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = out / "moments.csv"
        rows = [[r.lam, r.bias_sq, r.var_trace, r.mse] for r in reports]
        dataio.write_csv(csv_path, ["lambda", "bias_sq", "var_trace", "mse"], rows)
        print(f"wrote {csv_path}")
    return 0


def cmd_simulate(args) -> int:
    cfg = simulate.preset(args.preset, seed=args.seed, replicates=args.replicates)
    csv_path, svg_path = simulate.path_experiment(cfg, args.out_dir)
    print(f"preset {args.preset} (n={cfg.n}, p={cfg.p}, seed={cfg.seed})")
    print(f"wrote {csv_path}")
    print(f"wrote {svg_path}")
    if cfg.replicates > 1:
        results = simulate.mc_moments(cfg)
        rows = []
        for res in results:
            for j in range(cfg.p):
                rows.append(
                    [
                        res.lam,
                        j + 1,
                        res.empirical_mean[j],
                        res.analytic_mean[j],
                        res.empirical_var_diag[j],
                        res.analytic_var_diag[j],
                    ]
                )
        mc_path = Path(args.out_dir) / "mc_moments.csv"
        dataio.write_csv(
            mc_path,
            ["lambda", "component", "empirical_mean", "analytic_mean",
             "empirical_var", "analytic_var"],
            rows,
        )
        print(f"wrote {mc_path} ({cfg.replicates} replicates)")
    return 0


def cmd_bench(args) -> int:
    rows = simulate.route_benchmark(
        args.sizes,
        _grid(args),
        args.out,
        seed=args.seed,
        measured_primal=args.measured_primal,
        measured_dual=args.measured_dual,
    )
    for row in rows:
        print(
            f"n={row['n']} p={row['p']}: path {row['path_seconds']:.3g} s, "
            f"dual total {row['dual_seconds_total']:.3g} s, "
            f"primal total {row['primal_seconds_total']:.3g} s "
            f"(from {row['primal_fits_measured']} measured), "
            f"primal/path ratio {row['primal_over_path_ratio']:.3g}x"
        )
    print(f"wrote {args.out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ridgekit",
        description="Ridge regression: fitting, moment analytics, penalty selection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("fit", help="fit one penalty and print coefficients")
    _add_data_flags(sp)
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("path", help="coefficient path over a penalty grid")
    _add_data_flags(sp)
    _add_grid_flags(sp)
    sp.add_argument("--loocv", action="store_true", help="add a leave-one-out column")
    sp.add_argument("--out-dir", required=True)
    sp.set_defaults(func=cmd_path)

    sp = sub.add_parser("cv", help="cross-validated penalty selection")
    _add_data_flags(sp)
    _add_grid_flags(sp)
    sp.add_argument(
        "--method", choices=["kfold", "loocv", "loocv-brute"], default="loocv"
    )
    sp.add_argument("--k", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out-dir", default=None)
    sp.set_defaults(func=cmd_cv)

    sp = sub.add_parser(
        "moments", help="analytic bias/variance/MSE for a known truth"
    )
    _add_data_flags(sp, transform=False)
    sp.add_argument("--beta-true", type=_float_list, required=True)
    sp.add_argument("--sigma2", type=float, required=True)
    _add_grid_flags(sp)
    sp.add_argument("--out-dir", default=None)
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("simulate", help="run a named simulation preset")
    sp.add_argument("--preset", required=True, choices=simulate.preset_names())
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--replicates", type=int, default=None)
    sp.add_argument("--out-dir", required=True)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("bench", help="time the solver routes on given shapes")
    sp.add_argument("--sizes", type=_size_list, required=True, help="e.g. 100x5000,200x200")
    _add_grid_flags(sp, size=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--measured-primal", type=int, default=1)
    sp.add_argument("--measured-dual", type=int, default=3)
    sp.add_argument("--out", required=True, help="benchmark CSV path")
    sp.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else int(exc.code)
    try:
        return args.func(args)
    except (RidgeKitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
