"""
Smooth adaptive Gaussian mixture regression with K components.

theta = (beta_w, beta_mu, beta_sigma) with beta_w holding K - 1 blocks and
beta_mu, beta_sigma K blocks each, every block of length d_x. Component k
has mean x'beta_mu_k, standard deviation exp(-x'beta_sigma_k) and weight

    w_k = exp(-x'beta_w_k) / (1 + sum_{k' < K} exp(-x'beta_w_k')),  k < K.
"""

import math
from typing import Any, Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from ..core.model import ModelSpec, PriorSampler
from ..core.rng import RngStream
from .dataset import Dataset

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

BETA_W_STAR = np.array([1.0, 0.1, 0.1, -0.1])
BETA_MU_STAR = np.array([[1.0, 1.0, 1.0, -1.0], [-1.0, 1.0, 1.0, 1.0]])
BETA_SIGMA_STAR = np.array([[0.0, 1.0, 1.0, 1.0], [0.5, -1.0, -1.0, 1.0]])


def sagm_dim(k: int, dx: int) -> int:
    return dx * (3 * k - 1)


def split_params(
    thetas: np.ndarray, k: int, dx: int
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reshape (N, d) parameters into beta_w (N, K-1, dx), beta_mu and beta_sigma (N, K, dx)."""
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    n = thetas.shape[0]
    cut_w = (k - 1) * dx
    cut_mu = cut_w + k * dx
    beta_w = thetas[:, :cut_w].reshape(n, k - 1, dx)
    beta_mu = thetas[:, cut_w:cut_mu].reshape(n, k, dx)
    beta_sigma = thetas[:, cut_mu:].reshape(n, k, dx)
    return beta_w, beta_mu, beta_sigma


def log_mixture_weights(beta_w: np.ndarray, x: np.ndarray) -> np.ndarray:
    """log w_k for every row: shape (N, K)."""
    a = -beta_w @ x  # (N, K-1)
    a = np.concatenate([a, np.zeros((a.shape[0], 1))], axis=1)
    return a - logsumexp(a, axis=1, keepdims=True)


def sagm_logdensity(thetas: np.ndarray, z: float, x: np.ndarray, k: int = 2) -> np.ndarray:
    """
    log sum_k w_k(x) phi(z; x'beta_mu_k, exp(-x'beta_sigma_k)) via log-sum-exp.

    Args:
        thetas (np.ndarray): Shape (d,) or (N, d).
        z (float): Response.
        x (np.ndarray): Covariates, shape (d_x,).
        k (int): Number of components.

    Returns:
        np.ndarray: Shape (N,).
    """
    x = np.asarray(x, dtype=float)
    dx = x.shape[0]
    beta_w, beta_mu, beta_sigma = split_params(thetas, k, dx)
    log_w = log_mixture_weights(beta_w, x)
    mean = beta_mu @ x
    s = beta_sigma @ x  # log precision scale: sd = exp(-s)
    log_phi = -LOG_SQRT_2PI + s - 0.5 * (z - mean) ** 2 * np.exp(2.0 * s)
    return logsumexp(log_w + log_phi, axis=1)


def sagm_theta_star() -> np.ndarray:
    """Generating parameter of the K = 2, d_x = 4 benchmark."""
    return np.concatenate([BETA_W_STAR, BETA_MU_STAR.ravel(), BETA_SIGMA_STAR.ravel()])


class SagmModel(ModelSpec):
    """Mixture regression on Theta = {theta : theta_1 >= 0}; records are (z, x)."""

    def __init__(self, k: int = 2, dx: int = 4, true_param: Optional[np.ndarray] = None):
        if k < 2:
            raise ValueError("k must be >= 2")
        if true_param is None and (k, dx) == (2, 4):
            true_param = sagm_theta_star()
        super().__init__(sagm_dim(k, dx), true_param)
        self.k = k
        self.dx = dx

    def in_support(self, thetas: np.ndarray) -> np.ndarray:
        return thetas[:, 0] >= 0.0

    def log_density(self, thetas: np.ndarray, y: Any) -> np.ndarray:
        z, x = y
        return sagm_logdensity(thetas, z, x, self.k)

    def default_prior(self) -> PriorSampler:
        """Exp(1) on theta_1, N(0, I) on the rest."""

        def sample(rng: RngStream, n: int) -> np.ndarray:
            return np.column_stack([rng.exponential(n), rng.normal((n, self.dim - 1))])

        return sample


def simulate_sagm(
    n: int,
    rng: RngStream,
    k: int = 2,
    dx: int = 4,
    theta_star: Optional[np.ndarray] = None,
) -> Dataset:
    """
    Draw x = (1, N(0, I)) and z from the mixture at theta_star.

    Args:
        n (int): Number of records.
        rng (RngStream): Random stream.
        k (int): Components.
        dx (int): Covariates, intercept included.
        theta_star (np.ndarray, optional): Defaults to the K = 2, d_x = 4
            benchmark parameter.

    Returns:
        Dataset: Records (z, x) and theta_star.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if theta_star is None:
        if (k, dx) != (2, 4):
            raise ValueError("theta_star is required unless k=2 and dx=4")
        theta_star = sagm_theta_star()
    theta_star = np.asarray(theta_star, dtype=float)
    x = np.column_stack([np.ones(n), rng.normal((n, dx - 1))])
    beta_w, beta_mu, beta_sigma = split_params(theta_star, k, dx)
    a = np.column_stack([-x @ beta_w[0].T, np.zeros(n)])
    probs = np.exp(a - logsumexp(a, axis=1, keepdims=True))
    # Inverse-CDF component choice, one uniform per record.
    u = rng.uniform(n)
    comp = np.minimum((u[:, None] > np.cumsum(probs, axis=1)).sum(axis=1), k - 1)
    rows = np.arange(n)
    mean = (x @ beta_mu[0].T)[rows, comp]
    sd = np.exp(-(x @ beta_sigma[0].T))[rows, comp]
    z = mean + sd * rng.normal(n)
    return Dataset(z, x, theta_star)
