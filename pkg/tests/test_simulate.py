"""Tests for the synthetic-design generators and Monte-Carlo harness.

Statistical checks run at sample sizes where a four-standard-error band
is decisive, and every assertion is deterministic once the seed is fixed.
"""

import filecmp

import numpy as np
import pytest
from numpy.testing import assert_allclose

from ridgekit.dataio import read_csv
from ridgekit.estimator import degrees_of_freedom, solution_path
from ridgekit.linalg import thin_svd
from ridgekit.simulate import (
    McMomentsResult,
    SimConfig,
    ar1_covariance,
    design_covariance,
    equicorrelation_covariance,
    gen_design,
    gen_response,
    mc_moments,
    path_experiment,
    preset,
    preset_names,
    route_benchmark,
)


def config(**overrides):
    base = dict(
        n=40,
        p=3,
        structure="equicorrelation",
        correlation=0.5,
        beta_true=np.array([1.0, -1.0, 0.5]),
        sigma=1.0,
        replicates=1,
        seed=100,
        lambdas=np.array([10.0, 1.0, 0.1]),
    )
    base.update(overrides)
    return SimConfig(**base)


class TestSimConfig:
    def test_validates_shape(self):
        with pytest.raises(ValueError, match="n >= 2"):
            config(n=1)

    def test_validates_beta_length(self):
        with pytest.raises(ValueError, match="beta_true has length"):
            config(beta_true=np.ones(2))

    @pytest.mark.parametrize("sigma", [0.0, -1.0, np.inf])
    def test_validates_sigma(self, sigma):
        with pytest.raises(ValueError, match="sigma"):
            config(sigma=sigma)

    def test_validates_replicates(self):
        with pytest.raises(ValueError, match="replicates"):
            config(replicates=0)

    def test_validates_grid(self):
        with pytest.raises(ValueError, match="nonnegative"):
            config(lambdas=np.array([1.0, -1.0]))
        with pytest.raises(ValueError, match="decreasing"):
            config(lambdas=np.array([0.1, 1.0]))

    def test_validates_structure(self):
        with pytest.raises(ValueError, match="unknown structure"):
            config(structure="toeplitz")

    def test_validates_correlation_range(self):
        with pytest.raises(ValueError, match="rho"):
            config(correlation=1.0)

    def test_ground_truth_squares_sigma(self):
        gt = config(sigma=0.5).ground_truth()
        assert gt.sigma2 == 0.25
        assert_allclose(gt.beta_true, [1.0, -1.0, 0.5])


class TestCovarianceBuilders:
    def test_equicorrelation_entries(self):
        cov = equicorrelation_covariance(3, 0.4)
        assert_allclose(cov, [[1.0, 0.4, 0.4], [0.4, 1.0, 0.4], [0.4, 0.4, 1.0]])

    def test_equicorrelation_boundary_is_rejected(self):
        # Eigenvalue 1 + (p-1)rho hits zero exactly at rho = -1/(p-1).
        with pytest.raises(ValueError, match="rho"):
            equicorrelation_covariance(3, -0.5)
        cov = equicorrelation_covariance(3, -0.499)
        assert np.linalg.eigvalsh(cov).min() > 0.0

    def test_equicorrelation_single_column(self):
        assert_allclose(equicorrelation_covariance(1, 0.9), [[1.0]])

    def test_ar1_entries(self):
        cov = ar1_covariance(3, 0.6)
        assert_allclose(cov, [[1.0, 0.6, 0.36], [0.6, 1.0, 0.6], [0.36, 0.6, 1.0]])

    @pytest.mark.parametrize("phi", [1.0, -1.0, 1.5])
    def test_ar1_range(self, phi):
        with pytest.raises(ValueError, match="phi"):
            ar1_covariance(3, phi)

    def test_ar1_positive_definite_near_boundary(self):
        assert np.linalg.eigvalsh(ar1_covariance(20, 0.95)).min() > 0.0

    def test_dispatch(self):
        cfg = config(structure="ar1", correlation=0.3)
        assert_allclose(design_covariance(cfg), ar1_covariance(3, 0.3))


class TestGenDesign:
    def test_deterministic(self):
        cfg = config()
        assert np.array_equal(gen_design(cfg), gen_design(cfg))

    def test_shape(self):
        assert gen_design(config(n=7, p=3)).shape == (7, 3)

    def test_zero_correlation_gives_near_identity_covariance(self):
        cfg = config(n=10000, p=4, correlation=0.0, beta_true=np.ones(4))
        x = gen_design(cfg)
        sample = x.T @ x / cfg.n
        assert_allclose(sample, np.eye(4), atol=6.0 / np.sqrt(cfg.n))

    def test_equicorrelation_is_reproduced(self):
        cfg = config(n=10000, correlation=0.9)
        corr = np.corrcoef(gen_design(cfg), rowvar=False)
        off = corr[~np.eye(3, dtype=bool)]
        assert_allclose(off, 0.9, atol=0.03)

    def test_ar1_lag_decay(self):
        cfg = config(n=10000, structure="ar1", correlation=0.6)
        corr = np.corrcoef(gen_design(cfg), rowvar=False)
        assert corr[0, 1] == pytest.approx(0.6, abs=0.05)
        assert corr[0, 2] == pytest.approx(0.36, abs=0.05)


class TestGenResponse:
    def test_deterministic_in_seed(self):
        cfg = config()
        x = gen_design(cfg)
        gt = cfg.ground_truth()
        assert np.array_equal(gen_response(x, gt, [5, 1]), gen_response(x, gt, [5, 1]))
        assert not np.array_equal(gen_response(x, gt, [5, 1]), gen_response(x, gt, [5, 2]))

    def test_pure_noise_variance(self):
        from ridgekit.moments import GroundTruth

        x = np.zeros((20000, 2))
        gt = GroundTruth(beta_true=np.zeros(2), sigma2=4.0)
        y = gen_response(x, gt, 6)
        assert y.mean() == pytest.approx(0.0, abs=0.06)
        assert y.var(ddof=1) == pytest.approx(4.0, rel=0.05)

    def test_small_noise_recovers_linear_part(self):
        cfg = config(sigma=1e-8)
        x = gen_design(cfg)
        y = gen_response(x, cfg.ground_truth(), 7)
        assert_allclose(y, x @ cfg.beta_true, atol=1e-6)

    def test_length_mismatch(self):
        cfg = config()
        with pytest.raises(ValueError, match="columns"):
            gen_response(np.ones((4, 2)), cfg.ground_truth(), 0)


class TestMcMoments:
    @pytest.mark.parametrize("seed", [100, 101])
    def test_empirical_matches_analytic_within_four_se(self, seed):
        cfg = config(seed=seed, replicates=2500)
        for res in mc_moments(cfg):
            se_mean = np.sqrt(res.analytic_var_diag / res.replicates)
            assert np.all(np.abs(res.empirical_mean - res.analytic_mean) <= 4.0 * se_mean)
            se_var = res.analytic_var_diag * np.sqrt(2.0 / (res.replicates - 1))
            assert np.all(
                np.abs(res.empirical_var_diag - res.analytic_var_diag) <= 4.0 * se_var
            )

    def test_one_result_per_penalty(self):
        cfg = config(replicates=3)
        results = mc_moments(cfg)
        assert [res.lam for res in results] == [10.0, 1.0, 0.1]
        assert all(isinstance(res, McMomentsResult) for res in results)
        assert all(res.replicates == 3 for res in results)

    def test_deterministic(self):
        cfg = config(replicates=50)
        a, b = mc_moments(cfg), mc_moments(cfg)
        for res_a, res_b in zip(a, b):
            assert np.array_equal(res_a.empirical_mean, res_b.empirical_mean)
            assert np.array_equal(res_a.empirical_var_diag, res_b.empirical_var_diag)


class TestPathExperiment:
    def path_config(self, **overrides):
        return config(lambdas=np.geomspace(100.0, 0.01, 21), **overrides)

    def test_writes_csv_and_svg(self, tmp_path):
        csv_path, svg_path = path_experiment(self.path_config(), tmp_path)
        assert csv_path == tmp_path / "path.csv"
        assert svg_path == tmp_path / "path.svg"
        assert svg_path.read_bytes().lstrip().startswith(b"<?xml")

    def test_csv_round_trips_and_matches_recomputation(self, tmp_path):
        cfg = self.path_config()
        csv_path, _ = path_experiment(cfg, tmp_path)
        data = read_csv(csv_path, response_column="loocv")
        assert data.feature_names == ("lambda", "beta_1", "beta_2", "beta_3", "df")
        assert data.x.shape == (21, 5)
        assert np.array_equal(data.x[:, 0], cfg.lambdas)

        x = gen_design(cfg)
        svd = thin_svd(x)
        y = gen_response(x, cfg.ground_truth(), [cfg.seed, 1])
        path = solution_path(svd, y, cfg.lambdas, with_loocv=True)
        assert np.array_equal(data.x[:, 1:4], path.betas.T)
        assert np.array_equal(data.x[:, 4], path.dfs)
        assert np.array_equal(data.y, path.loocv)
        assert_allclose(
            data.x[:, 4],
            [degrees_of_freedom(svd.d, lam) for lam in cfg.lambdas],
            rtol=1e-12,
        )

    def test_short_grid_is_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="20 points"):
            path_experiment(config(), tmp_path)

    def test_reruns_are_byte_identical(self, tmp_path):
        cfg = self.path_config()
        first = tmp_path / "first"
        second = tmp_path / "second"
        path_experiment(cfg, first)
        path_experiment(cfg, second)
        assert filecmp.cmp(first / "path.csv", second / "path.csv", shallow=False)
        assert filecmp.cmp(first / "path.svg", second / "path.svg", shallow=False)


class TestPresets:
    def test_names(self):
        assert preset_names() == ["collinear-sign-flip", "variance-shrinkage"]

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="unknown preset"):
            preset("ridge-classic")

    def test_overrides(self):
        cfg = preset("variance-shrinkage", seed=3, replicates=10)
        assert cfg.seed == 3
        assert cfg.replicates == 10
        assert cfg.n == 50 and cfg.p == 5
        base = preset("variance-shrinkage")
        assert base.seed == 11 and base.replicates == 5000

    def test_collinear_preset_flips_a_sign(self):
        cfg = preset("collinear-sign-flip")
        x = gen_design(cfg)
        y = gen_response(x, cfg.ground_truth(), [cfg.seed, 1])
        path = solution_path(thin_svd(x), y, cfg.lambdas)
        signs = np.sign(path.betas)
        flips = np.any(signs[:, :-1] * signs[:, 1:] < 0, axis=1)
        assert flips.any()
        # At the heavy end of the grid every coefficient is nearly gone.
        top = np.abs(path.betas[:, 0])
        assert np.all(top <= 0.05 * np.abs(path.betas).max())


class TestRouteBenchmark:
    def test_table_shape_and_consistency(self, tmp_path):
        out = tmp_path / "bench.csv"
        rows = route_benchmark(
            [(30, 10), (10, 30)], np.geomspace(10.0, 0.1, 5), out, seed=1
        )
        assert len(rows) == 2
        expected_keys = [
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
        assert list(rows[0]) == expected_keys
        for row in rows:
            assert row["grid_size"] == 5
            assert row["path_seconds"] > 0.0
            assert row["primal_over_path_ratio"] == pytest.approx(
                row["primal_seconds_total"] / row["path_seconds"], rel=1e-9
            )
        assert out.exists()
        assert len(out.read_text().splitlines()) == 3

    def test_measured_counts_are_capped_by_grid(self, tmp_path):
        rows = route_benchmark(
            [(10, 4)],
            [1.0, 0.1],
            tmp_path / "bench.csv",
            measured_primal=50,
            measured_dual=50,
        )
        assert rows[0]["primal_fits_measured"] == 2
        assert rows[0]["dual_fits_measured"] == 2

    def test_measured_counts_must_be_positive(self, tmp_path):
        with pytest.raises(ValueError, match="measured fit counts"):
            route_benchmark([(10, 4)], [1.0], tmp_path / "b.csv", measured_primal=0)
