import pytest

from gpfso.bench.cli import EXIT_ALL_FAILED, EXIT_CONFIG, EXIT_OK, load_experiment, main
from gpfso.bench.io import load_config_file, parse_overrides
from gpfso.errors import ConfigError
from gpfso.types import ExperimentConfig, KernelKind, ModelName, ResamplingScheme
from gpfso.validation import build_experiment_config, format_validation_error, parse_float_list, validate_keys

CONFIG = """\
# benchmark settings
[experiment]
model=cqr
tau=0.99
n_obs=2000
replications=3
thresholds=0.1,0.5

[optimizer]
n_particles=500
alpha=0.3
nu=2
kernel=gpfso_mix
mix_weight=0.2
resampling=systematic
"""


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    monkeypatch.delenv("GPFSO_WORKERS", raising=False)
    monkeypatch.delenv("GPFSO_OUTPUT_DIR", raising=False)


class TestValidation:
    def test_validate_keys(self):
        ok, invalid = validate_keys(["alpha", "n_obs", "bogus"])
        assert not ok
        assert invalid == ["bogus"]
        assert "bogus" in format_validation_error(invalid)

    def test_float_list(self):
        assert parse_float_list("0.1, 0.16;0.2") == [0.1, 0.16, 0.2]
        with pytest.raises(ConfigError):
            parse_float_list("a,b")

    def test_nested_keys(self):
        cfg = build_experiment_config(
            {"alpha": "0.7", "kernel": "ks_pfso", "iota": "0.5", "schedule_b": "2", "model": "sagm"}
        )
        assert cfg.model == ModelName.SAGM
        assert cfg.gpfso.alpha == 0.7
        assert cfg.gpfso.schedule.alpha == 0.7
        assert cfg.gpfso.schedule.b == 2.0
        assert cfg.gpfso.kernel.kind == KernelKind.KS_PFSO
        assert cfg.gpfso.kernel.iota == 0.5

    def test_overrides_keep_base(self):
        base = build_experiment_config({"n_particles": "300", "rho": "0.2"})
        cfg = build_experiment_config({"alpha": "0.1"}, base=base)
        assert cfg.gpfso.n_particles == 300
        assert cfg.gpfso.schedule.rho is None
        assert cfg.gpfso.schedule.growth_rho < 0.1

    def test_derived_rho_is_not_inherited(self):
        base = build_experiment_config({"alpha": "0.1"})
        assert base.gpfso.schedule.growth_rho == pytest.approx(0.05)
        swept = build_experiment_config({"alpha": 0.5}, base=base)
        fresh = build_experiment_config({"alpha": 0.5})
        assert swept.gpfso.schedule.model_dump() == fresh.gpfso.schedule.model_dump()
        assert swept.gpfso.schedule.growth_rho == 0.1

    def test_explicit_rho_is_inherited(self):
        base = build_experiment_config({"alpha": "0.1", "rho": "0.02"})
        swept = build_experiment_config({"alpha": 0.5}, base=base)
        assert swept.gpfso.schedule.rho == 0.02

    def test_empty_means_unset(self):
        cfg = build_experiment_config({"dim": "", "sigma_diag": ""})
        assert cfg.dim is None
        assert cfg.gpfso.sigma_diag is None

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            build_experiment_config({"n_particle": "10"})

    def test_invalid_value(self):
        with pytest.raises(ConfigError):
            build_experiment_config({"c_ess": "1.5"})
        with pytest.raises(ConfigError):
            build_experiment_config({"model": "sagm", "algorithm": "adagrad"})


class TestConfigFile:
    def test_sections_and_comments(self, tmp_path):
        path = tmp_path / "exp.conf"
        path.write_text(CONFIG)
        flat = load_config_file(path)
        assert flat["model"] == "cqr"
        assert "experiment" not in flat
        cfg = build_experiment_config(flat)
        assert cfg.tau == 0.99
        assert cfg.thresholds == [0.1, 0.5]
        assert cfg.gpfso.n_particles == 500
        assert cfg.gpfso.resampling == ResamplingScheme.SYSTEMATIC
        assert cfg.gpfso.kernel.mix_weight == 0.2

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config_file(tmp_path / "nope.conf")

    def test_precedence(self, tmp_path, monkeypatch):
        path = tmp_path / "exp.conf"
        path.write_text(CONFIG)
        monkeypatch.setenv("GPFSO_WORKERS", "4")
        monkeypatch.setenv("GPFSO_OUTPUT_DIR", str(tmp_path / "env"))
        cfg = load_experiment(str(path), ["--n-obs=100", f"--output_dir={tmp_path / 'cli'}"])
        assert cfg.workers == 4
        assert cfg.n_obs == 100
        assert cfg.output_dir == str(tmp_path / "cli")
        assert isinstance(cfg, ExperimentConfig)

    def test_parse_overrides(self):
        assert parse_overrides(["--c-sigma=2", "--model=sagm"]) == {"c_sigma": "2", "model": "sagm"}
        with pytest.raises(ConfigError):
            parse_overrides(["alpha=0.3"])


class TestMain:
    def test_run(self, tmp_path, capsys):
        code = main(
            [
                "--log-level=WARNING",
                "run",
                "--n_obs=200",
                "--n_particles=30",
                "--replications=2",
                f"--output_dir={tmp_path}",
            ]
        )
        assert code == EXIT_OK
        assert '"success": true' in capsys.readouterr().out
        assert (tmp_path / "summary.txt").exists()

    def test_unknown_key(self, tmp_path):
        assert main(["run", "--n-particle=3", f"--output_dir={tmp_path}"]) == EXIT_CONFIG

    def test_missing_config_file(self, tmp_path):
        assert main(["run", str(tmp_path / "nope.conf")]) == EXIT_CONFIG

    def test_every_replication_failed(self, tmp_path):
        code = main(
            [
                "run",
                "--n_obs=20",
                f"--data_file={tmp_path / 'missing.csv'}",
                f"--output_dir={tmp_path / 'out'}",
            ]
        )
        assert code == EXIT_ALL_FAILED

    def test_sweep(self, tmp_path, capsys):
        code = main(
            [
                "sweep",
                "--alphas=0.5,0.8",
                "--n_obs=50",
                "--n_particles=20",
                f"--output_dir={tmp_path}",
            ]
        )
        assert code == EXIT_OK
        assert capsys.readouterr().out.count("1/1 ok") == 2
        assert (tmp_path / "alpha=0.8_c_sigma=1_nu=50" / "aggregate.csv").exists()

    def test_slope(self, tmp_path, capsys):
        t = range(1, 101)
        path = tmp_path / "agg.csv"
        with open(path, "w") as f:
            f.write("t,err_bar_l2\n")
            for ti in t:
                f.write(f"{ti},{2.0 * ti ** -0.5!r}\n")
        assert main(["slope", str(path), "--t-lo=10"]) == EXIT_OK
        out = capsys.readouterr().out
        assert '"beta2": 0.5' in out or '"beta2": 0.49999' in out

    def test_slope_too_few_points(self, tmp_path):
        path = tmp_path / "agg.csv"
        path.write_text("t,err_bar_l2\n1,1.0\n2,0.5\n")
        assert main(["slope", str(path)]) == EXIT_CONFIG

    def test_slope_missing_column(self, tmp_path):
        path = tmp_path / "agg.csv"
        path.write_text("t,err\n1,1.0\n")
        assert main(["slope", str(path)]) == EXIT_CONFIG
