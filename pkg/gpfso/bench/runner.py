"""
Replication runner for benchmark experiments.
"""

import itertools
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..adagrad import adagrad_run
from ..core.model import ModelSpec
from ..core.rng import RngStream
from ..errors import InsufficientPoints
from ..models import (
    BimodalToyModel,
    CqrModel,
    Dataset,
    GaussianMeanModel,
    MultimodalModel,
    SagmModel,
    bootstrap_sample,
    simulate_bimodal,
    simulate_cqr,
    simulate_gaussian,
    simulate_multimodal,
    simulate_sagm,
)
from ..optimizer import Gpfso
from ..types.experiment import (
    Algorithm,
    ErrorNorm,
    ExperimentConfig,
    ExperimentSummary,
    ModelName,
    ReplicationResult,
    SlopeFit,
)
from ..types.trace import Trace
from ..validation import build_experiment_config
from .io import (
    ERROR_COLUMNS,
    ensure_dir,
    read_csv_columns,
    write_aggregate_csv,
    write_summary,
    write_trace_csv,
)
from .slope import fit_slope, success_rate

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[ReplicationResult], None]

DEFAULT_DIMS = {
    ModelName.GAUSSIAN: 1,
    ModelName.CQR: 5,
    ModelName.MULTIMODAL: 20,
    ModelName.BIMODAL: 1,
}


def simulate_data(cfg: ExperimentConfig, n: int, rng: RngStream) -> Dataset:
    """Simulate n records of the configured model."""
    dim = cfg.dim or DEFAULT_DIMS.get(cfg.model)
    if cfg.model == ModelName.GAUSSIAN:
        return simulate_gaussian(n, rng)
    if cfg.model == ModelName.CQR:
        return simulate_cqr(n, rng, dim=dim, tau=cfg.tau)
    if cfg.model == ModelName.MULTIMODAL:
        return simulate_multimodal(n, rng, dim=dim)
    if cfg.model == ModelName.SAGM:
        return simulate_sagm(n, rng, k=cfg.k, dx=cfg.dx)
    return simulate_bimodal(n, rng)


def build_model(cfg: ExperimentConfig, theta_star: Optional[np.ndarray]) -> ModelSpec:
    """Model instance for the config, targeting `theta_star` when known."""
    shift, var = cfg.prior_shift, cfg.prior_var
    if cfg.model == ModelName.GAUSSIAN:
        star = 0.0 if theta_star is None else float(theta_star[0])
        return GaussianMeanModel(
            true_param=star,
            prior_mean=0.0 if shift is None else shift,
            prior_var=25.0 if var is None else var,
        )
    if cfg.model == ModelName.CQR:
        return CqrModel(
            tau=cfg.tau,
            dim=cfg.dim or DEFAULT_DIMS[ModelName.CQR],
            true_param=theta_star,
            prior_shift=10.0 if shift is None else shift,
            prior_var=2.0 if var is None else var,
        )
    if cfg.model == ModelName.MULTIMODAL:
        return MultimodalModel(dim=cfg.dim or DEFAULT_DIMS[ModelName.MULTIMODAL], true_param=theta_star)
    if cfg.model == ModelName.SAGM:
        return SagmModel(k=cfg.k, dx=cfg.dx, true_param=theta_star)
    return BimodalToyModel(gap=cfg.bimodal_gap, prior_var=0.25 if var is None else var)


def build_problem(
    cfg: ExperimentConfig, seed: int
) -> Tuple[ModelSpec, Dataset, RngStream]:
    """
    Model, the T observations to stream, and a spare stream for the prior.

    Data come from `data_file` when set, else from a simulation seeded by
    `data_seed` (shared across replications) or by the replication seed. In
    bootstrap mode T draws are taken with replacement from the finite set.
    """
    data_rng, boot_rng, prior_rng = RngStream(seed).fork(3)
    if cfg.data_seed is not None:
        data_rng = RngStream(cfg.data_seed)
    if cfg.data_file is not None:
        data = Dataset.from_csv(cfg.data_file)
    else:
        size = cfg.dataset_size if cfg.bootstrap else cfg.n_obs
        data = simulate_data(cfg, size, data_rng)
    if cfg.bootstrap:
        data = bootstrap_sample(data, cfg.n_obs, boot_rng)
    else:
        data = data.take(cfg.n_obs)
    model = build_model(cfg, data.theta_star)
    if cfg.data_file is not None and cfg.model != ModelName.GAUSSIAN:
        # No target for file data: error columns stay empty.
        model.true_param = None
    return model, data, prior_rng


def run_single(cfg: ExperimentConfig, seed: int) -> Trace:
    """One seeded run of the configured algorithm."""
    model, data, prior_rng = build_problem(cfg, seed)
    if cfg.algorithm == Algorithm.ADAGRAD:
        theta0 = model.default_prior()(prior_rng, 1)[0]
        return adagrad_run(
            model.grad_log_density,
            theta0,
            data,
            step_size=cfg.adagrad_step,
            target=model.true_param,
            record_stride=cfg.record_stride,
            record_factor=cfg.record_factor,
        )
    gpfso_cfg = cfg.gpfso.model_copy(update={"seed": seed})
    engine = Gpfso(model, gpfso_cfg)
    return engine.run(data, record_stride=cfg.record_stride, record_factor=cfg.record_factor)


def trace_path(output_dir: str, index: int) -> Path:
    return Path(output_dir) / f"run_{index:03d}.csv"


def _final_errors(trace: Trace, norm: ErrorNorm) -> Tuple[Optional[float], Optional[float]]:
    row = trace.final
    if norm == ErrorNorm.MAX:
        return row.err_tilde_max, row.err_bar_max
    return row.err_tilde_l2, row.err_bar_l2


def run_replication(cfg: ExperimentConfig, index: int) -> ReplicationResult:
    """
    Run replication `index` and write its trace CSV.

    Failures are reported in the result, never raised.
    """
    seed = (cfg.seed + index) % 2**64
    start = time.perf_counter()
    try:
        trace = run_single(cfg, seed)
        path = trace_path(cfg.output_dir, index)
        write_trace_csv(trace, path)
        tilde, bar = _final_errors(trace, cfg.error_norm)
        return ReplicationResult(
            index=index,
            seed=seed,
            success=True,
            final_err_tilde=tilde,
            final_err_bar=bar,
            trace_path=str(path),
            wall_clock=time.perf_counter() - start,
        )
    except Exception as e:
        logger.warning("replication %d (seed %d) failed: %s", index, seed, e)
        return ReplicationResult(
            index=index,
            seed=seed,
            success=False,
            error=str(e),
            failed_at=getattr(e, "t", None),
            wall_clock=time.perf_counter() - start,
        )


def aggregate(paths: Sequence[str]) -> Tuple[np.ndarray, Dict[str, np.ndarray]]:
    """Recorded t and the mean of every error column across trace CSVs."""
    tables = [read_csv_columns(p) for p in paths]
    times = tables[0]["t"].astype(np.int64)
    for table in tables[1:]:
        if not np.array_equal(table["t"], tables[0]["t"]):
            raise ValueError("trace files record different steps")
    means = {name: np.mean([tab[name] for tab in tables], axis=0) for name in ERROR_COLUMNS}
    return times, means


def _fit_all(
    times: np.ndarray, means: Dict[str, np.ndarray], window: Tuple[int, int]
) -> Dict[str, Optional[SlopeFit]]:
    fits = {}
    for name in ERROR_COLUMNS:
        try:
            fits[name] = fit_slope(times, means[name], *window)
        except (InsufficientPoints, ValueError) as e:
            logger.info("no slope for %s: %s", name, e)
            fits[name] = None
    return fits


def run_experiment(
    cfg: ExperimentConfig, on_progress: Optional[ProgressCallback] = None
) -> ExperimentSummary:
    """
    Run R seeded replications and summarise them.

    Writes run_XXX.csv per replication, aggregate.csv and summary.txt into
    `cfg.output_dir`. Replication r uses seed `seed + r`; results do not depend
    on the number of workers.

    Args:
        cfg (ExperimentConfig): Experiment settings.
        on_progress (Callable[[ReplicationResult], None], optional): Called
            once per finished replication, in replication order.

    Returns:
        ExperimentSummary: success is False only when every replication failed.
    """
    start = time.perf_counter()
    ensure_dir(cfg.output_dir)
    indices = list(range(cfg.replications))
    logger.info(
        "running %d replication(s) of %s with %d worker(s)",
        cfg.replications,
        cfg.model.value,
        cfg.workers,
    )
    results: List[ReplicationResult] = []
    if cfg.workers > 1 and cfg.replications > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for result in pool.map(run_replication, itertools.repeat(cfg), indices):
                results.append(result)
                if on_progress:
                    on_progress(result)
    else:
        for index in indices:
            result = run_replication(cfg, index)
            results.append(result)
            if on_progress:
                on_progress(result)

    ok = [r for r in results if r.success]
    summary = ExperimentSummary(
        success=bool(ok),
        error=None if ok else "all replications failed",
        n_replications=cfg.replications,
        n_failed=len(results) - len(ok),
        seed=cfg.seed,
        output_dir=cfg.output_dir,
        results=results,
    )
    if ok:
        times, means = aggregate([r.trace_path for r in ok])
        write_aggregate_csv(times, means, Path(cfg.output_dir) / "aggregate.csv")
        if cfg.n_obs > 1:
            summary.slopes = _fit_all(times, means, cfg.window())
        finals = [
            np.inf if r.final_err_bar is None or not r.success else r.final_err_bar
            for r in results
        ]
        if any(r.final_err_bar is not None for r in ok):
            summary.success_rates = {
                f"{threshold:g}": success_rate(finals, threshold) for threshold in cfg.thresholds
            }
    summary.wall_clock = time.perf_counter() - start
    write_summary(summary, cfg, Path(cfg.output_dir) / "summary.txt")
    logger.info(
        "experiment finished: %d/%d succeeded in %.1fs",
        len(ok),
        cfg.replications,
        summary.wall_clock,
    )
    return summary


def sweep(
    cfg: ExperimentConfig,
    alphas: Optional[Sequence[float]] = None,
    c_sigmas: Optional[Sequence[float]] = None,
    nus: Optional[Sequence[float]] = None,
    on_progress: Optional[ProgressCallback] = None,
) -> List[Tuple[Dict[str, float], ExperimentSummary]]:
    """
    Run one experiment per point of the cartesian product of the given values.

    Each point writes into `<output_dir>/alpha=<a>_c_sigma=<c>_nu=<n>`;
    unspecified axes keep the base config's value.

    Returns:
        List of (point, summary) pairs in product order.
    """
    axes = {
        "alpha": list(alphas) if alphas else [cfg.gpfso.alpha],
        "c_sigma": list(c_sigmas) if c_sigmas else [cfg.gpfso.c_sigma],
        "nu": list(nus) if nus else [cfg.gpfso.nu],
    }
    out = []
    for values in itertools.product(*axes.values()):
        point = dict(zip(axes, values))
        name = "_".join(f"{k}={v:g}" for k, v in point.items())
        flat = dict(point, output_dir=str(Path(cfg.output_dir) / name))
        point_cfg = build_experiment_config(flat, base=cfg)
        logger.info("sweep point %s", name)
        out.append((point, run_experiment(point_cfg, on_progress=on_progress)))
    return out
