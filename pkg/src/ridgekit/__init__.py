"""Ridge regression toolkit: estimation, exact moments, penalty selection.

The pieces fit together around one thin SVD of the design: the three
fitting routes (primal, dual, spectral) agree to high accuracy, the
moment formulas consume the same factorization, and the leave-one-out
shortcut certifies itself against a brute-force oracle. A batch CLI
(``ridgekit``) exposes the lot on CSV files.
"""

from .dataio import (
    Dataset,
    Standardizer,
    destandardize_coefficients,
    read_csv,
    standardize,
    write_csv,
)
from .errors import (
    DataError,
    NotPositiveDefiniteError,
    RidgeKitError,
    SingularDesignError,
    SvdConvergenceError,
)
from .estimator import (
    RidgeFit,
    RidgePath,
    augmented_ols_oracle,
    constraint_radius,
    degrees_of_freedom,
    fit_auto,
    fit_dual,
    fit_primal,
    fit_svd,
    hat_diagonal,
    lambda_for_constraint,
    predict,
    solution_path,
)
from .linalg import ThinSvd, solve_spd, thin_svd
from .moments import (
    GroundTruth,
    MomentsReport,
    bias_squared,
    expectation_ridge,
    mse_curve,
    mse_improvement_exists,
    mse_ridge,
    mse_slope_at_zero,
    variance_dominance_gap,
    variance_ridge,
    variance_trace,
)
from .selection import (
    CvReport,
    LambdaGrid,
    information_criterion,
    kfold_cv,
    loocv_bruteforce,
    loocv_shortcut,
    make_log_grid,
    select_lambda,
)
from .simulate import (
    McMomentsResult,
    SimConfig,
    gen_design,
    gen_response,
    mc_moments,
    path_experiment,
    preset,
    route_benchmark,
)

__version__ = "0.1.0"

__all__ = [
    "DataError",
    "Dataset",
    "CvReport",
    "GroundTruth",
    "LambdaGrid",
    "McMomentsResult",
    "MomentsReport",
    "NotPositiveDefiniteError",
    "RidgeFit",
    "RidgeKitError",
    "RidgePath",
    "SimConfig",
    "SingularDesignError",
    "Standardizer",
    "SvdConvergenceError",
    "ThinSvd",
    "augmented_ols_oracle",
    "bias_squared",
    "constraint_radius",
    "degrees_of_freedom",
    "destandardize_coefficients",
    "expectation_ridge",
    "fit_auto",
    "fit_dual",
    "fit_primal",
    "fit_svd",
    "gen_design",
    "gen_response",
    "hat_diagonal",
    "information_criterion",
    "kfold_cv",
    "lambda_for_constraint",
    "loocv_bruteforce",
    "loocv_shortcut",
    "make_log_grid",
    "mc_moments",
    "mse_curve",
    "mse_improvement_exists",
    "mse_ridge",
    "mse_slope_at_zero",
    "path_experiment",
    "predict",
    "preset",
    "read_csv",
    "route_benchmark",
    "select_lambda",
    "solution_path",
    "solve_spd",
    "standardize",
    "thin_svd",
    "variance_dominance_gap",
    "variance_ridge",
    "variance_trace",
    "write_csv",
]
