"""
File formats of the benchmark harness: config files, trace and aggregate
CSVs, and the key=value summary.
"""

import csv
import io
import os
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Union

import numpy as np
from dotenv import dotenv_values

from ..errors import ConfigError
from ..types.experiment import ExperimentConfig, ExperimentSummary
from ..types.trace import Trace

PathLike = Union[str, Path]

ERROR_COLUMNS = ["err_tilde_l2", "err_bar_l2", "err_tilde_max", "err_bar_max"]


def format_float(value: Optional[float]) -> str:
    """17 significant digits; empty for a missing value."""
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return ""
    return format(float(value), ".17g")


def trace_records(trace: Trace) -> Iterable[List[str]]:
    for row in trace.rows:
        yield (
            [str(row.t)]
            + [format_float(v) for v in row.theta_tilde]
            + [format_float(v) for v in row.theta_bar]
            + [format_float(row.ess), "1" if row.resampled else "0"]
            + [format_float(getattr(row, name)) for name in ERROR_COLUMNS]
        )


def write_trace_csv(trace: Trace, path: PathLike) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(trace.columns())
        writer.writerows(trace_records(trace))


def read_csv_columns(path: PathLike) -> Dict[str, np.ndarray]:
    """All columns of a CSV as float arrays; empty cells become NaN."""
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file")
        rows = [[float(cell) if cell != "" else np.nan for cell in row] for row in reader]
    table = np.asarray(rows, dtype=float).reshape(len(rows), len(header))
    return {name: table[:, i] for i, name in enumerate(header)}


def write_aggregate_csv(
    times: Sequence[int], means: Mapping[str, np.ndarray], path: PathLike
) -> None:
    """Mean of each error column per recorded t."""
    names = list(means)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["t"] + names)
        for i, t in enumerate(times):
            writer.writerow([str(int(t))] + [format_float(means[name][i]) for name in names])


def load_config_file(path: PathLike) -> Dict[str, str]:
    """
    Read a flat key=value config file.

    `#` comments and blank lines are ignored, as are `[section]` header lines
    (keys are flat).

    Args:
        path (PathLike): UTF-8 text file.

    Returns:
        Dict[str, str]: Raw values, keyed as written.

    Raises:
        ConfigError: If the file cannot be read.
    """
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    body = "\n".join(line for line in lines if not line.strip().startswith("["))
    values = dotenv_values(stream=io.StringIO(body))
    return {k: ("" if v is None else v) for k, v in values.items()}


def parse_overrides(args: Sequence[str]) -> Dict[str, str]:
    """
    Turn `--key=value` arguments into a dict (dashes in keys become underscores).

    Raises:
        ConfigError: On an argument that is not of the form --key=value.
    """
    out: Dict[str, str] = {}
    for arg in args:
        if not arg.startswith("--") or "=" not in arg:
            raise ConfigError(f"override must look like --key=value, got {arg!r}")
        key, value = arg[2:].split("=", 1)
        out[key.replace("-", "_")] = value
    return out


def summary_lines(summary: ExperimentSummary, cfg: ExperimentConfig) -> List[str]:
    lines = [
        f"model={cfg.model.value}",
        f"algorithm={cfg.algorithm.value}",
        f"seed={summary.seed}",
        f"replications={summary.n_replications}",
        f"failures={summary.n_failed}",
        f"n_obs={cfg.n_obs}",
        f"error_norm={cfg.error_norm.value}",
    ]
    for name, fit in summary.slopes.items():
        if fit is None:
            lines.append(f"slope.{name}=")
            continue
        lines += [
            f"slope.{name}.beta1={format_float(fit.beta1)}",
            f"slope.{name}.beta2={format_float(fit.beta2)}",
            f"slope.{name}.residual_se={format_float(fit.residual_se)}",
            f"slope.{name}.n_points={fit.n_points}",
            f"slope.{name}.n_skipped={fit.n_skipped}",
            f"slope.{name}.window={fit.t_lo},{fit.t_hi}",
        ]
    for name, rate in summary.success_rates.items():
        lines.append(f"success_rate.{name}={format_float(rate)}")
    lines.append(f"wall_clock={summary.wall_clock:.3f}")
    return lines


def write_summary(summary: ExperimentSummary, cfg: ExperimentConfig, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(summary_lines(summary, cfg)) + "\n")


def ensure_dir(path: PathLike) -> Path:
    path = Path(path)
    os.makedirs(path, exist_ok=True)
    return path
