"""
Finite datasets of observation records.

A record is a scalar z for covariate-free models and a (z, x) pair
otherwise. On disk a dataset is a comma-separated file with header
`z,x1,...,xd` and floats written at 17 significant digits.
"""

from pathlib import Path
from typing import Any, Iterator, Optional, Union

import numpy as np

from ..core.rng import RngStream

PathLike = Union[str, Path]


class Dataset:
    """Responses, optional covariates and the parameter that generated them."""

    def __init__(
        self,
        z: np.ndarray,
        x: Optional[np.ndarray] = None,
        theta_star: Optional[np.ndarray] = None,
    ):
        self.z = np.asarray(z, dtype=float).reshape(-1)
        if x is not None:
            x = np.asarray(x, dtype=float)
            if x.ndim == 1:
                x = x.reshape(-1, 1)
            if x.shape[0] != self.z.shape[0]:
                raise ValueError("z and x must have the same number of rows")
        self.x = x
        self.theta_star = None if theta_star is None else np.asarray(theta_star, dtype=float)

    def __len__(self) -> int:
        return self.z.shape[0]

    def __getitem__(self, i: int) -> Any:
        if self.x is None:
            return float(self.z[i])
        return float(self.z[i]), self.x[i]

    def __iter__(self) -> Iterator[Any]:
        for i in range(len(self)):
            yield self[i]

    @property
    def n_covariates(self) -> int:
        return 0 if self.x is None else self.x.shape[1]

    def take(self, n: int) -> "Dataset":
        """First n records (sequential streaming of a file)."""
        if n > len(self):
            raise ValueError(f"dataset has {len(self)} records, {n} requested")
        x = None if self.x is None else self.x[:n]
        return Dataset(self.z[:n], x, self.theta_star)

    def to_csv(self, path: PathLike) -> None:
        header = ["z"] + [f"x{i + 1}" for i in range(self.n_covariates)]
        table = self.z.reshape(-1, 1) if self.x is None else np.column_stack([self.z, self.x])
        np.savetxt(path, table, fmt="%.17g", delimiter=",", header=",".join(header), comments="")

    @classmethod
    def from_csv(cls, path: PathLike) -> "Dataset":
        """Read a dataset written by `to_csv`; theta_star is unknown."""
        with open(path, encoding="utf-8") as f:
            header = f.readline().strip().split(",")
        if not header or header[0] != "z":
            raise ValueError(f"{path}: first column must be 'z'")
        table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        if table.shape[1] != len(header):
            raise ValueError(f"{path}: header has {len(header)} columns, rows have {table.shape[1]}")
        x = table[:, 1:] if table.shape[1] > 1 else None
        return cls(table[:, 0], x)


class BootstrapStream:
    """
    Endless i.i.d. draws, with replacement, from a finite dataset.

    Streaming these draws makes the optimizer target the maximum likelihood
    estimator of the dataset.
    """

    def __init__(self, dataset: Dataset, rng: RngStream):
        if len(dataset) == 0:
            raise ValueError("dataset must be nonempty")
        self.dataset = dataset
        self.rng = rng

    def next_index(self) -> int:
        return int(self.rng.integers(len(self.dataset)))

    def __iter__(self) -> Iterator[Any]:
        while True:
            yield bootstrap_next(self)


def bootstrap_next(stream: BootstrapStream) -> Any:
    """One uniform draw from the stream's dataset."""
    return stream.dataset[stream.next_index()]


def bootstrap_sample(dataset: Dataset, n: int, rng: RngStream) -> Dataset:
    """n bootstrap draws as a Dataset (indices drawn in one call)."""
    idx = rng.integers(len(dataset), size=n)
    x = None if dataset.x is None else dataset.x[idx]
    return Dataset(dataset.z[idx], x, dataset.theta_star)
