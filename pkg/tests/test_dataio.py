import numpy as np
import pytest
from numpy.testing import assert_allclose

from ridgekit import dataio, estimator
from ridgekit.errors import DataError


class TestReadCsv:
    def test_header_parse(self, csv_file):
        path = csv_file("a,b,y\n1,2,3\n4,5,6\n7,8,9\n")
        data = dataio.read_csv(path, response_column="y")
        assert (data.n, data.p) == (3, 2)
        assert data.feature_names == ("a", "b")
        assert_allclose(data.x, [[1, 2], [4, 5], [7, 8]])
        assert_allclose(data.y, [3, 6, 9])

    def test_response_by_index_without_header(self, csv_file):
        path = csv_file("1,2,3\n4,5,6\n")
        data = dataio.read_csv(path, has_header=False, response_column=0)
        assert_allclose(data.y, [1, 4])
        assert data.feature_names == ("x2", "x3")

    def test_missing_response_names_available_columns(self, csv_file):
        path = csv_file("a,b,y\n1,2,3\n4,5,6\n")
        with pytest.raises(DataError, match="a, b, y"):
            dataio.read_csv(path, response_column="z")

    def test_ragged_row_reports_line(self, csv_file):
        path = csv_file("a,b,y\n1,2,3\n4,5\n")
        with pytest.raises(DataError, match="line 3"):
            dataio.read_csv(path, response_column="y")

    def test_unparseable_field_reports_position(self, csv_file):
        path = csv_file("a,y\n1,2\nx,4\n")
        with pytest.raises(DataError, match="line 3, column 1"):
            dataio.read_csv(path, response_column="y")

    def test_overflow_field_reports_position(self, csv_file):
        path = csv_file("a,y\n1,2\n3,1e400\n")
        with pytest.raises(DataError, match="line 3, column 2"):
            dataio.read_csv(path, response_column="y")

    def test_too_few_rows(self, csv_file):
        path = csv_file("a,y\n1,2\n")
        with pytest.raises(DataError, match="at least 2 rows"):
            dataio.read_csv(path, response_column="y")

    def test_duplicate_response_name(self, csv_file):
        path = csv_file("y,y\n1,2\n3,4\n")
        with pytest.raises(DataError, match="duplicated"):
            dataio.read_csv(path, response_column="y")

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            dataio.read_csv(tmp_path / "absent.csv", response_column="y")


class TestStandardize:
    def test_center_only(self, csv_file):
        path = csv_file("a,y\n1,1\n2,2\n3,3\n")
        data = dataio.read_csv(path, response_column="y")
        std, scaler = dataio.standardize(data, center=True, scale=False)
        assert_allclose(std.x[:, 0], [-1.0, 0.0, 1.0])
        assert_allclose(std.y, [-1.0, 0.0, 1.0])
        assert scaler.centered and not scaler.scaled
        assert_allclose(scaler.x_scales, [1.0])

    def test_identity_transform(self, csv_file):
        path = csv_file("a,y\n1,1\n2,2\n")
        data = dataio.read_csv(path, response_column="y")
        std, scaler = dataio.standardize(data, center=False, scale=False)
        assert_allclose(std.x, data.x)
        assert_allclose(scaler.x_means, [0.0])
        assert_allclose(scaler.x_scales, [1.0])
        assert scaler.y_mean == 0.0

    def test_moments_after_transform(self):
        rng = np.random.default_rng(11)
        data = dataio.Dataset(
            x=3.0 + 2.0 * rng.standard_normal((20, 5)),
            y=rng.standard_normal(20),
            feature_names=tuple(f"x{j}" for j in range(5)),
        )
        std, _ = dataio.standardize(data, center=True, scale=True)
        assert np.max(np.abs(std.x.mean(axis=0))) <= 1e-12
        assert_allclose(std.x.std(axis=0, ddof=1), np.ones(5), atol=1e-10)

    def test_constant_column_under_scale_names_column(self):
        data = dataio.Dataset(
            x=np.column_stack([np.ones(4), np.arange(4.0)]),
            y=np.arange(4.0),
            feature_names=("flat", "ramp"),
        )
        with pytest.raises(DataError, match="flat"):
            dataio.standardize(data, center=True, scale=True)


class TestDestandardize:
    def test_identity_scaler(self):
        scaler = dataio.Standardizer(
            x_means=np.zeros(2),
            x_scales=np.ones(2),
            y_mean=0.0,
            centered=False,
            scaled=False,
        )
        beta, intercept = dataio.destandardize_coefficients(np.array([1.0, 2.0]), scaler)
        assert_allclose(beta, [1.0, 2.0])
        assert intercept == 0.0

    def test_center_only_arithmetic(self):
        scaler = dataio.Standardizer(
            x_means=np.array([1.0, 1.0]),
            x_scales=np.ones(2),
            y_mean=2.0,
            centered=True,
            scaled=False,
        )
        beta, intercept = dataio.destandardize_coefficients(np.array([1.0, 1.0]), scaler)
        assert_allclose(beta, [1.0, 1.0])
        assert intercept == 0.0

    def test_length_mismatch(self):
        scaler = dataio.Standardizer(
            x_means=np.zeros(2),
            x_scales=np.ones(2),
            y_mean=0.0,
            centered=False,
            scaled=False,
        )
        with pytest.raises(ValueError, match="length"):
            dataio.destandardize_coefficients(np.ones(3), scaler)

    @pytest.mark.parametrize("center,scale", [(True, False), (True, True)])
    def test_fitted_values_round_trip(self, center, scale):
        rng = np.random.default_rng(8)
        data = dataio.Dataset(
            x=1.5 + rng.standard_normal((25, 4)),
            y=4.0 + rng.standard_normal(25),
            feature_names=tuple("abcd"),
        )
        std, scaler = dataio.standardize(data, center=center, scale=scale)
        fit = estimator.fit_primal(std.x, std.y, 0.7)
        beta, intercept = dataio.destandardize_coefficients(fit.beta, scaler)
        original_scale = data.x @ beta + intercept
        standardized = fit.fitted + scaler.y_mean
        assert_allclose(original_scale, standardized, rtol=1e-10)


class TestCsvRoundTrip:
    def test_write_then_read_preserves_values(self, tmp_path):
        rng = np.random.default_rng(13)
        values = np.concatenate([rng.standard_normal(5) * 10.0**rng.integers(-8, 8, 5)])
        rows = [[v, 2.0 * v] for v in values]
        path = tmp_path / "round.csv"
        dataio.write_csv(path, ["a", "y"], rows)
        back = dataio.read_csv(path, response_column="y")
        assert np.array_equal(back.x[:, 0], values)
        assert np.array_equal(back.y, 2.0 * values)

    def test_format_value_is_round_trip_safe(self):
        for v in (1 / 3, 1e-300, -2.5e17, np.pi):
            assert float(dataio.format_value(v)) == v

    def test_header_width_checked(self, tmp_path):
        with pytest.raises(ValueError, match="header"):
            dataio.write_csv(tmp_path / "bad.csv", ["a"], [[1.0, 2.0]])
