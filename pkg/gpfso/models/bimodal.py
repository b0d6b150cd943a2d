"""
One-dimensional two-mode objective for escape experiments.

f_theta(y) = 0.6 phi(y - theta) + 0.4 phi(y - theta + L) with Y ~ N(0, 1).
The expected log-likelihood peaks at theta = 0 and has a lower local mode
near theta = L; the default prior sits on the local mode.
"""

import math
from typing import Any

import numpy as np
from scipy.special import logsumexp

from ..core.model import ModelSpec, PriorSampler
from ..core.rng import RngStream
from .dataset import Dataset

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
WEIGHTS = (0.6, 0.4)


class BimodalToyModel(ModelSpec):
    def __init__(self, gap: float = 4.0, prior_var: float = 0.25):
        super().__init__(1, np.zeros(1))
        self.gap = gap
        self.prior_var = prior_var
        self._log_w = np.log(np.asarray(WEIGHTS))

    def log_density(self, thetas: np.ndarray, y: Any) -> np.ndarray:
        theta = thetas[:, 0]
        y = float(y)
        parts = np.stack(
            [
                self._log_w[0] - LOG_SQRT_2PI - 0.5 * (y - theta) ** 2,
                self._log_w[1] - LOG_SQRT_2PI - 0.5 * (y - theta + self.gap) ** 2,
            ],
            axis=1,
        )
        return logsumexp(parts, axis=1)

    def default_prior(self) -> PriorSampler:
        """N(L, prior_var): every particle starts in the wrong mode."""
        mean, sd = self.gap, math.sqrt(self.prior_var)

        def sample(rng: RngStream, n: int) -> np.ndarray:
            return mean + sd * rng.normal((n, 1))

        return sample


def simulate_bimodal(n: int, rng: RngStream) -> Dataset:
    """n draws from N(0, 1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Dataset(rng.normal(n), theta_star=np.zeros(1))
