"""CSV ingestion, predictor/response standardization, and back-transforms.

All transformations are pure: they return new Dataset/Standardizer values
and never mutate their inputs.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class Dataset:
    """An n x p design matrix with its response vector and column labels."""

    x: np.ndarray
    y: np.ndarray
    feature_names: tuple

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]


@dataclass(frozen=True)
class Standardizer:
    """Centering/scaling parameters recorded by standardize().

    When ``centered`` is False the stored means are zero; when ``scaled`` is
    False the stored scales are one, so destandardize_coefficients() is a
    no-op for the untouched parts.
    """

    x_means: np.ndarray
    x_scales: np.ndarray
    y_mean: float
    centered: bool
    scaled: bool


def _parse_field(token: str, line_no: int, col_no: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise DataError(
            f"field {token!r} at line {line_no}, column {col_no} is not a decimal real"
        ) from None
    if not math.isfinite(value):
        raise DataError(
            f"field {token!r} at line {line_no}, column {col_no} overflows to a "
            "non-finite value"
        )
    return value


def read_csv(path, has_header: bool = True, response_column=None) -> Dataset:
    """Read a comma-separated dataset, splitting off the response column.

    Parameters
    ----------
    path : str or Path
        UTF-8 CSV file; one optional header row, then numeric rows.
    has_header : bool
        Whether the first row holds column names.
    response_column : str or int
        Name of the response column (requires a header) or its 0-based
        position.

    Line and column numbers in error messages are 1-based positions in the
    file itself.
    """
    if response_column is None:
        raise ValueError("response_column is required")
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        rows = list(reader)
    # A trailing newline yields an empty final record; drop blank records.
    rows = [(i + 1, row) for i, row in enumerate(rows) if row and any(row)]
    if not rows:
        raise DataError(f"{path}: file contains no data rows")

    if has_header:
        header_line, header = rows[0]
        names = [h.strip() for h in header]
        data_rows = rows[1:]
    else:
        names = None
        data_rows = rows

    if not data_rows:
        raise DataError(f"{path}: no data rows after the header")
    width = len(data_rows[0][1])
    ncols = len(names) if names is not None else width
    if names is not None and width != ncols:
        raise DataError(
            f"{path}: line {data_rows[0][0]} has {width} fields, header has {ncols}"
        )

    if isinstance(response_column, str) and not has_header:
        try:
            response_column = int(response_column)
        except ValueError:
            raise DataError(
                "response_column must be a 0-based index when the file has no header"
            ) from None
    if isinstance(response_column, bool):
        raise ValueError("response_column must be a name or integer index")
    if isinstance(response_column, int):
        if not 0 <= response_column < ncols:
            raise DataError(
                f"response column index {response_column} out of range for "
                f"{ncols} columns"
            )
        response_idx = response_column
    else:
        if names is None:
            raise DataError("a named response column requires has_header=True")
        matches = [i for i, name in enumerate(names) if name == response_column]
        if not matches:
            raise DataError(
                f"response column {response_column!r} not found; available columns: "
                + ", ".join(names)
            )
        if len(matches) > 1:
            raise DataError(f"response column {response_column!r} is duplicated")
        response_idx = matches[0]

    values = np.empty((len(data_rows), ncols))
    for out_row, (line_no, row) in enumerate(data_rows):
        if len(row) != ncols:
            raise DataError(
                f"{path}: line {line_no} has {len(row)} fields, expected {ncols}"
            )
        for col, token in enumerate(row):
            values[out_row, col] = _parse_field(token.strip(), line_no, col + 1)

    if values.shape[0] < 2:
        raise DataError(f"{path}: need at least 2 rows, got {values.shape[0]}")
    if ncols < 2:
        raise DataError(f"{path}: no predictor columns besides the response")

    keep = [i for i in range(ncols) if i != response_idx]
    if names is None:
        names = [f"x{i + 1}" for i in range(ncols)]
    return Dataset(
        x=values[:, keep],
        y=values[:, response_idx],
        feature_names=tuple(names[i] for i in keep),
    )


def standardize(data: Dataset, center: bool = True, scale: bool = False):
    """Center and/or scale the predictors (and center the response).

    Scaling divides by the sample standard deviation (denominator n - 1).
    Returns the transformed Dataset together with the Standardizer that
    undoes it.
    """
    x = data.x
    p = data.p
    means = x.mean(axis=0) if center else np.zeros(p)
    y_mean = float(data.y.mean()) if center else 0.0
    if scale:
        scales = x.std(axis=0, ddof=1)
        for j, s in enumerate(scales):
            if s == 0.0:
                raise DataError(
                    f"column {data.feature_names[j]!r} is constant and cannot be scaled"
                )
    else:
        scales = np.ones(p)
    x_out = (x - means) / scales
    y_out = data.y - y_mean
    out = Dataset(x=x_out, y=y_out, feature_names=data.feature_names)
    return out, Standardizer(
        x_means=means,
        x_scales=scales,
        y_mean=y_mean,
        centered=center,
        scaled=scale,
    )


def destandardize_coefficients(beta_std: np.ndarray, s: Standardizer):
    """Map coefficients fit on standardized data back to the original scale.

    Returns (beta_orig, intercept) such that predictions
    intercept + x_orig @ beta_orig equal y_mean + x_std @ beta_std.
    """
    beta_std = np.asarray(beta_std, dtype=float)
    if beta_std.ndim != 1 or beta_std.size != s.x_means.size:
        raise ValueError(
            f"beta has length {beta_std.size}, expected {s.x_means.size}"
        )
    beta_orig = beta_std / s.x_scales
    intercept = s.y_mean - float(s.x_means @ beta_orig)
    return beta_orig, intercept


def format_value(v: float) -> str:
    """Round-trip-safe decimal rendering (17 significant digits)."""
    return f"{float(v):.17g}"


def write_csv(path, header, rows) -> None:
    """Write a numeric table with full decimal precision."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.shape[1] != len(header):
        raise ValueError(
            f"rows have {rows.shape[1]} columns, header has {len(header)}"
        )
    with open(path, "w", newline="", encoding="utf-8") as handle:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(format_value(v) for v in row) + "\n")
