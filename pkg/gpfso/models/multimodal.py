"""
Multimodal Laplace regression: z | x ~ Laplace(mu(theta, x), b) with

    mu(theta, x) = sum_i exp(-x_i theta_i^2) + x_i theta_{d-i+1}

on the open max-norm ball of radius 20 around theta_star.
"""

import math
from typing import Any, Optional

import numpy as np

from ..core.model import ModelSpec, PriorSampler
from ..core.rng import RngStream
from .dataset import Dataset

SCALE = 0.5
RADIUS = 20.0
NOISE_SD = 2.0


def multimodal_mu(thetas: np.ndarray, x: np.ndarray) -> np.ndarray:
    """mu for one theta of shape (d,) or a batch of shape (N, d)."""
    thetas = np.asarray(thetas, dtype=float)
    x = np.asarray(x, dtype=float)
    return np.sum(np.exp(-x * thetas**2), axis=-1) + thetas[..., ::-1] @ x


class MultimodalModel(ModelSpec):
    """Laplace likelihood around mu(theta, x); records are (z, x)."""

    def __init__(
        self,
        dim: int = 20,
        true_param: Optional[np.ndarray] = None,
        scale: float = SCALE,
        radius: float = RADIUS,
    ):
        if true_param is None:
            true_param = -np.ones(dim)
        super().__init__(dim, true_param)
        # Support centre; stays put if the error target is cleared.
        self.centre = np.asarray(true_param, dtype=float)
        self.scale = scale
        self.radius = radius
        self._log_norm = math.log(2.0 * scale)

    def in_support(self, thetas: np.ndarray) -> np.ndarray:
        return np.max(np.abs(thetas - self.centre), axis=1) < self.radius

    def log_density(self, thetas: np.ndarray, y: Any) -> np.ndarray:
        z, x = y
        return -self._log_norm - np.abs(z - multimodal_mu(thetas, x)) / self.scale

    def default_prior(self) -> PriorSampler:
        """Uniform on the support (open boundary has probability zero)."""
        centre, radius = self.centre, self.radius

        def sample(rng: RngStream, n: int) -> np.ndarray:
            return centre + radius * (2.0 * rng.uniform((n, self.dim)) - 1.0)

        return sample


def simulate_multimodal(
    n: int, rng: RngStream, dim: int = 20, theta_star: Optional[np.ndarray] = None
) -> Dataset:
    """x ~ U[-1, 1]^d and z | x ~ N(mu(theta_star, x), 4); theta_star = (-1, ..., -1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    theta_star = -np.ones(dim) if theta_star is None else np.asarray(theta_star, dtype=float)
    x = 2.0 * rng.uniform((n, dim)) - 1.0
    mu = np.exp(-x * theta_star**2).sum(axis=1) + x @ theta_star[::-1]
    z = mu + NOISE_SD * rng.normal(n)
    return Dataset(z, x, theta_star)
