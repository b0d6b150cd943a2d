import numpy as np
import pytest

from gpfso.bench import build_model, build_problem, fit_slope, run_experiment, run_replication, success_rate, sweep
from gpfso.bench.io import ERROR_COLUMNS, format_float, read_csv_columns, summary_lines
from gpfso.core import RngStream
from gpfso.errors import InsufficientPoints
from gpfso.models import CqrModel, Dataset, GaussianMeanModel, MultimodalModel, SagmModel
from gpfso.types import ExperimentConfig, GpfsoConfig


def small_config(tmp_path, **kwargs):
    base = dict(
        model="gaussian",
        n_obs=300,
        replications=2,
        record_stride=1,
        output_dir=str(tmp_path / "out"),
        gpfso=GpfsoConfig(n_particles=50, seed=5),
    )
    base.update(kwargs)
    return ExperimentConfig(**base)


class TestFitSlope:
    def test_exact_power_law(self):
        t = np.arange(1, 1001, dtype=float)
        fit = fit_slope(t, 3.0 * t**-0.5, 10, 1000)
        assert fit.beta2 == pytest.approx(0.5, abs=1e-10)
        assert fit.beta1 == pytest.approx(np.log(3.0), abs=1e-10)
        assert fit.residual_se == pytest.approx(0.0, abs=1e-10)
        assert fit.n_points == 991

    def test_constant_error(self):
        t = np.arange(1, 200, dtype=float)
        assert fit_slope(t, np.full(t.shape, 0.7), 1, 199).beta2 == pytest.approx(0.0, abs=1e-12)

    def test_perturbed_power_law(self):
        t = np.arange(1, 10_001, dtype=float)
        errors = t**-0.3 * np.exp(0.05 * np.sin(t))
        fit = fit_slope(t, errors, 100, 10_000)
        assert fit.beta2 == pytest.approx(0.30, abs=0.01)
        assert fit.residual_se > 0.0

    def test_scale_invariance(self):
        t = np.arange(1, 500, dtype=float)
        errors = t**-0.4 * (1.0 + 0.1 * np.cos(t))
        a = fit_slope(t, errors, 5, 499)
        b = fit_slope(t, 10.0 * errors, 5, 499)
        assert a.beta2 == pytest.approx(b.beta2, abs=1e-10)
        assert b.beta1 - a.beta1 == pytest.approx(np.log(10.0), abs=1e-10)

    def test_skips_non_positive(self):
        t = np.arange(1, 31, dtype=float)
        errors = t**-1.0
        errors[[3, 7]] = 0.0
        errors[11] = np.nan
        fit = fit_slope(t, errors, 1, 30)
        assert fit.n_skipped == 3
        assert fit.n_points == 27
        assert fit.beta2 == pytest.approx(1.0)

    def test_too_few_points(self):
        t = np.arange(1, 10, dtype=float)
        with pytest.raises(InsufficientPoints):
            fit_slope(t, t**-0.5, 1, 9)

    def test_bad_window(self):
        with pytest.raises(ValueError):
            fit_slope([1, 2], [1.0, 1.0], 5, 5)


class TestSuccessRate:
    def test_examples(self):
        assert success_rate([0.05, 0.2, 0.01, 0.5], 0.1) == pytest.approx(0.5)
        assert success_rate([0.1], 0.1) == 0.0
        assert success_rate([np.inf, 0.0], 0.1) == 0.5

    def test_empty(self):
        with pytest.raises(ValueError):
            success_rate([], 0.1)


class TestBuildProblem:
    def test_models(self, tmp_path):
        assert isinstance(build_model(small_config(tmp_path), None), GaussianMeanModel)
        assert isinstance(build_model(small_config(tmp_path, model="cqr", dim=3), np.zeros(3)), CqrModel)
        assert build_model(small_config(tmp_path, model="multimodal", dim=4), None).dim == 4
        assert isinstance(build_model(small_config(tmp_path, model="sagm"), None), SagmModel)

    def test_data_seed_shares_dataset(self, tmp_path):
        cfg = small_config(tmp_path, data_seed=99)
        _, a, _ = build_problem(cfg, 1)
        _, b, _ = build_problem(cfg, 2)
        np.testing.assert_array_equal(a.z, b.z)
        _, c, _ = build_problem(small_config(tmp_path), 1)
        _, d, _ = build_problem(small_config(tmp_path), 2)
        assert not np.array_equal(c.z, d.z)

    def test_bootstrap_draws_from_finite_set(self, tmp_path):
        cfg = small_config(tmp_path, bootstrap=True, dataset_size=20)
        _, data, _ = build_problem(cfg, 3)
        assert len(data) == 300
        assert len(np.unique(data.z)) <= 20

    def test_data_file(self, tmp_path):
        path = tmp_path / "data.csv"
        Dataset(np.linspace(-1, 1, 400)).to_csv(path)
        model, data, _ = build_problem(small_config(tmp_path, data_file=str(path)), 0)
        np.testing.assert_array_equal(data.z, np.linspace(-1, 1, 400)[:300])
        np.testing.assert_array_equal(model.true_param, [0.0])

    def test_data_file_has_no_target(self, tmp_path):
        rng = np.random.default_rng(0)
        path = tmp_path / "data.csv"
        Dataset(rng.normal(size=400), rng.uniform(-1, 1, size=(400, 2))).to_csv(path)
        cfg = small_config(tmp_path, model="multimodal", dim=2, data_file=str(path), replications=1)
        model, _, _ = build_problem(cfg, 0)
        assert model.true_param is None
        np.testing.assert_array_equal(model.centre, [-1.0, -1.0])
        summary = run_experiment(cfg)
        assert summary.success
        assert summary.success_rates == {}
        table = read_csv_columns(tmp_path / "out" / "run_000.csv")
        for name in ERROR_COLUMNS:
            assert np.all(np.isnan(table[name]))


class TestRunExperiment:
    def test_single_step(self, tmp_path):
        cfg = small_config(tmp_path, n_obs=1, replications=1)
        summary = run_experiment(cfg)
        assert summary.success
        assert summary.slopes == {}
        table = read_csv_columns(tmp_path / "out" / "run_000.csv")
        assert table["t"].tolist() == [1.0]

    def test_outputs(self, tmp_path):
        progress = []
        summary = run_experiment(small_config(tmp_path), on_progress=progress.append)
        out = tmp_path / "out"
        assert [r.index for r in progress] == [0, 1]
        assert summary.n_failed == 0
        assert {p.name for p in out.iterdir()} == {"run_000.csv", "run_001.csv", "aggregate.csv", "summary.txt"}
        header = (out / "run_000.csv").read_text().splitlines()[0]
        assert header == "t,theta_tilde_1,theta_bar_1,ess,resampled," + ",".join(ERROR_COLUMNS)
        assert summary.slopes["err_bar_l2"] is not None
        assert set(summary.success_rates) == {"0.1"}

    def test_aggregate_is_mean_of_runs(self, tmp_path):
        run_experiment(small_config(tmp_path, replications=3))
        out = tmp_path / "out"
        runs = [read_csv_columns(out / f"run_{i:03d}.csv") for i in range(3)]
        agg = read_csv_columns(out / "aggregate.csv")
        for name in ERROR_COLUMNS:
            np.testing.assert_allclose(agg[name], np.mean([r[name] for r in runs], axis=0), rtol=1e-14)

    def test_replication_seeds(self, tmp_path):
        cfg = small_config(tmp_path)
        assert run_replication(cfg, 3).seed == 8

    def test_deterministic_across_workers(self, tmp_path):
        one = small_config(tmp_path / "a", replications=3, workers=1)
        two = small_config(tmp_path / "b", replications=3, workers=2)
        run_experiment(one)
        run_experiment(two)
        for name in ("run_000.csv", "run_001.csv", "run_002.csv", "aggregate.csv"):
            a = (tmp_path / "a" / "out" / name).read_bytes()
            b = (tmp_path / "b" / "out" / name).read_bytes()
            assert a == b

    def test_failures_are_recorded(self, tmp_path):
        cfg = small_config(tmp_path, data_file=str(tmp_path / "missing.csv"))
        summary = run_experiment(cfg)
        assert not summary.success
        assert summary.n_failed == 2
        assert all(r.error for r in summary.results)
        assert (tmp_path / "out" / "summary.txt").exists()

    def test_adagrad(self, tmp_path):
        summary = run_experiment(small_config(tmp_path, algorithm="adagrad", replications=1))
        assert summary.success
        table = read_csv_columns(tmp_path / "out" / "run_000.csv")
        assert np.all(np.isnan(table["ess"]))

    def test_summary_keys(self, tmp_path):
        cfg = small_config(tmp_path)
        summary = run_experiment(cfg)
        lines = (tmp_path / "out" / "summary.txt").read_text().splitlines()
        keys = [line.split("=", 1)[0] for line in lines]
        assert keys[:7] == ["model", "algorithm", "seed", "replications", "failures", "n_obs", "error_norm"]
        assert "slope.err_bar_l2.beta2" in keys
        assert "success_rate.0.1" in keys
        assert keys[-1] == "wall_clock"
        assert summary_lines(summary, cfg)[0] == "model=gaussian"


class TestSweep:
    def test_cartesian_product(self, tmp_path):
        cfg = small_config(tmp_path, n_obs=50, replications=1)
        results = sweep(cfg, alphas=[0.5, 0.7], nus=[2.0, 50.0])
        assert len(results) == 4
        points = [p for p, _ in results]
        assert points[0] == {"alpha": 0.5, "c_sigma": 1.0, "nu": 2.0}
        assert all(s.success for _, s in results)
        assert (tmp_path / "out" / "alpha=0.7_c_sigma=1_nu=50" / "summary.txt").exists()


def test_format_float():
    assert format_float(None) == ""
    assert format_float(float("nan")) == ""
    assert float(format_float(0.1)) == 0.1
    assert format_float(2.0) == "2"
