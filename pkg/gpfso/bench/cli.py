"""
Command-line entry point.

    gpfso run [CONFIG] [--key=value ...]
    gpfso sweep [CONFIG] [--alphas=..] [--c-sigmas=..] [--nus=..] [--key=value ...]
    gpfso slope CSV [--column=err_bar_l2] [--t-lo=..] [--t-hi=..]

Exit codes: 0 success, 1 configuration or input error, 2 every replication
failed.
"""

import argparse
import logging
import os
import sys
from typing import Dict, List, Optional, Sequence

from dotenv import load_dotenv

from ..errors import ConfigError, InsufficientPoints
from ..types.experiment import ExperimentConfig, ReplicationResult
from ..validation import build_experiment_config, parse_float_list
from .io import load_config_file, parse_overrides, read_csv_columns
from .runner import run_experiment, sweep
from .slope import fit_slope

logger = logging.getLogger("gpfso.cli")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_ALL_FAILED = 2


def env_defaults() -> Dict[str, str]:
    """Settings taken from GPFSO_* environment variables (after .env loading)."""
    out = {}
    if os.environ.get("GPFSO_WORKERS"):
        out["workers"] = os.environ["GPFSO_WORKERS"]
    if os.environ.get("GPFSO_OUTPUT_DIR"):
        out["output_dir"] = os.environ["GPFSO_OUTPUT_DIR"]
    return out


def load_experiment(config_path: Optional[str], extra: Sequence[str]) -> ExperimentConfig:
    """Environment defaults, then the config file, then --key=value overrides."""
    flat = env_defaults()
    if config_path:
        flat.update(load_config_file(config_path))
    flat.update(parse_overrides(extra))
    return build_experiment_config(flat)


def _report(result: ReplicationResult) -> None:
    if result.success:
        logger.info("replication %d done in %.1fs", result.index, result.wall_clock)
    else:
        logger.warning("replication %d failed: %s", result.index, result.error)


def _cmd_run(args: argparse.Namespace, extra: List[str]) -> int:
    cfg = load_experiment(args.config, extra)
    summary = run_experiment(cfg, on_progress=_report)
    print(summary)
    return EXIT_OK if summary.success else EXIT_ALL_FAILED


def _cmd_sweep(args: argparse.Namespace, extra: List[str]) -> int:
    cfg = load_experiment(args.config, extra)
    results = sweep(
        cfg,
        alphas=parse_float_list(args.alphas) if args.alphas else None,
        c_sigmas=parse_float_list(args.c_sigmas) if args.c_sigmas else None,
        nus=parse_float_list(args.nus) if args.nus else None,
        on_progress=_report,
    )
    for point, summary in results:
        print(f"{point}: {summary.n_replications - summary.n_failed}/{summary.n_replications} ok")
    return EXIT_OK if all(s.success for _, s in results) else EXIT_ALL_FAILED


def _cmd_slope(args: argparse.Namespace, extra: List[str]) -> int:
    if extra:
        raise ConfigError(f"unexpected arguments: {' '.join(extra)}")
    columns = read_csv_columns(args.csv)
    if args.column not in columns or "t" not in columns:
        raise ConfigError(f"{args.csv} has no column {args.column!r} (or no 't')")
    times = columns["t"]
    t_hi = args.t_hi if args.t_hi is not None else int(times.max())
    t_lo = args.t_lo if args.t_lo is not None else max(1, t_hi // 100)
    print(fit_slope(times, columns[args.column], t_lo, t_hi))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gpfso",
        description="Particle filter stochastic optimization benchmarks",
        allow_abbrev=False,
    )
    parser.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging verbosity",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    run_p = sub.add_parser("run", help="Run one experiment", allow_abbrev=False)
    run_p.add_argument("config", nargs="?", help="Flat key=value config file")

    sweep_p = sub.add_parser(
        "sweep", help="Run the cartesian product of alpha / c_sigma / nu", allow_abbrev=False
    )
    sweep_p.add_argument("config", nargs="?", help="Flat key=value config file")
    sweep_p.add_argument("--alphas", help="Comma-separated learning-rate exponents")
    sweep_p.add_argument("--c-sigmas", dest="c_sigmas", help="Comma-separated kernel scales")
    sweep_p.add_argument("--nus", help="Comma-separated Student-t degrees of freedom")

    slope_p = sub.add_parser(
        "slope", help="Fit a convergence slope on a trace or aggregate CSV", allow_abbrev=False
    )
    slope_p.add_argument("csv", help="CSV file with a 't' column")
    slope_p.add_argument("--column", default="err_bar_l2", help="Error column to fit")
    slope_p.add_argument("--t-lo", dest="t_lo", type=int, default=None)
    slope_p.add_argument("--t-hi", dest="t_hi", type=int, default=None)
    return parser


COMMANDS = {"run": _cmd_run, "sweep": _cmd_sweep, "slope": _cmd_slope}


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.cmd](args, extra)
    except (ConfigError, InsufficientPoints, OSError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
