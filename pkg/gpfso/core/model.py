"""
Base model implementation.

A model is a family of log-densities log f_theta(y) over a parameter set
Theta. Observations are opaque records: the library hands them to the model
untouched. `log_density` need not integrate to one; any loss -phi(theta, y)
is admissible.
"""

from __future__ import annotations

import typing as t
from abc import ABC, abstractmethod

import numpy as np

from .rng import RngStream

PriorSampler = t.Callable[[RngStream, int], np.ndarray]


class ModelSpec(ABC):
    """Base model class"""

    def __init__(self, dim: int, true_param: t.Optional[np.ndarray] = None):
        if dim < 1:
            raise ValueError("dim must be a positive integer")
        self.dim = dim
        self.true_param = (
            None if true_param is None else np.asarray(true_param, dtype=float)
        )

    @abstractmethod
    def log_density(self, thetas: np.ndarray, y: t.Any) -> np.ndarray:
        """
        Evaluate log f_theta(y) for a batch of parameters.

        Args:
            thetas (np.ndarray): Parameters, shape (N, d).
            y (Any): One observation record.

        Returns:
            np.ndarray: Shape (N,); -inf allowed, +inf never.
        """
        pass

    def in_support(self, thetas: np.ndarray) -> np.ndarray:
        """Membership in Theta for each row of `thetas` (default: all of R^d)."""
        return np.ones(np.asarray(thetas).shape[0], dtype=bool)

    def log_density_one(self, theta: np.ndarray, y: t.Any) -> float:
        """Scalar convenience wrapper around `log_density`."""
        theta = np.asarray(theta, dtype=float).reshape(1, -1)
        return float(self.log_density(theta, y)[0])

    def grad_log_density(self, theta: np.ndarray, y: t.Any) -> np.ndarray:
        """Gradient of log f_theta(y) in theta; only some models provide it."""
        raise NotImplementedError(f"{type(self).__name__} provides no gradient")

    def default_prior(self) -> PriorSampler:
        """Prior sampler used when a caller supplies none."""
        raise NotImplementedError(f"{type(self).__name__} has no default prior")


class CallableModel(ModelSpec):
    """Adapter for user-supplied scalar functions."""

    def __init__(
        self,
        log_density: t.Callable[[np.ndarray, t.Any], float],
        dim: int,
        in_support: t.Optional[t.Callable[[np.ndarray], bool]] = None,
        true_param: t.Optional[np.ndarray] = None,
    ):
        super().__init__(dim, true_param)
        self._log_density = log_density
        self._in_support = in_support

    def log_density(self, thetas: np.ndarray, y: t.Any) -> np.ndarray:
        values = np.array([self._log_density(theta, y) for theta in thetas], dtype=float)
        if np.any(values == np.inf):
            raise ValueError("log_density returned +inf")
        return values

    def in_support(self, thetas: np.ndarray) -> np.ndarray:
        if self._in_support is None:
            return super().in_support(thetas)
        return np.array([bool(self._in_support(theta)) for theta in thetas], dtype=bool)
