import numpy as np
import pytest


@pytest.fixture
def csv_file(tmp_path):
    """Write CSV text to a temp file and return its path."""

    def _write(text, name="data.csv"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def toy_csv(tmp_path):
    """A 40 x 3 regression dataset with known coefficients and intercept."""
    rng = np.random.default_rng(3)
    x = rng.standard_normal((40, 3))
    y = x @ np.array([1.5, -2.0, 0.5]) + 5.0 + 0.3 * rng.standard_normal(40)
    path = tmp_path / "toy.csv"
    lines = ["a,b,c,y"]
    for row, resp in zip(x, y):
        lines.append(",".join(f"{v:.17g}" for v in [*row, resp]))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
