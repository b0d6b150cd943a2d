from .runner import build_model, build_problem, run_experiment, run_replication, sweep
from .slope import fit_slope, success_rate

__all__ = [
    "build_model",
    "build_problem",
    "run_experiment",
    "run_replication",
    "sweep",
    "fit_slope",
    "success_rate",
]
