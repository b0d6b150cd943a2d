"""
Censored quantile regression through an asymmetric Laplace likelihood.

    f_{tau,theta}(z | x) = tau (1 - tau) exp(-rho_tau(z - max(x'theta, 0)))
    rho_tau(u)           = (|u| + (2 tau - 1) u) / 2
"""

import math
from typing import Any, Optional, Tuple

import numpy as np
from scipy.stats import norm, wishart

from ..core.model import ModelSpec, PriorSampler
from ..core.rng import RngStream
from .dataset import Dataset

# Intercept of theta_star^(0.5); the remaining coordinates are N(0, 1) draws.
INTERCEPT = 3.0
NOISE_SD = 2.0


def rho_tau(u: np.ndarray, tau: float) -> np.ndarray:
    """Check function."""
    return 0.5 * (np.abs(u) + (2.0 * tau - 1.0) * u)


def cqr_logdensity(thetas: np.ndarray, z: float, x: np.ndarray, tau: float) -> np.ndarray:
    """
    log tau(1 - tau) - rho_tau(z - max(x'theta, 0)).

    Args:
        thetas (np.ndarray): Shape (d,) or (N, d).
        z (float): Response.
        x (np.ndarray): Covariates, shape (d,).
        tau (float): Quantile level in (0, 1).

    Returns:
        np.ndarray: One value per row of `thetas` (a 0-d array for a single
            theta).
    """
    location = np.maximum(np.asarray(thetas, dtype=float) @ np.asarray(x, dtype=float), 0.0)
    return math.log(tau * (1.0 - tau)) - rho_tau(z - location, tau)


def cqr_grad(theta: np.ndarray, z: float, x: np.ndarray, tau: float) -> np.ndarray:
    """
    Gradient of cqr_logdensity in theta.

    rho_tau'(u) = (sign(u) + 2 tau - 1) / 2, so the kink u = 0 takes the value
    tau - 1/2. Where x'theta <= 0 the location is flat and the gradient is 0.
    """
    theta = np.asarray(theta, dtype=float)
    x = np.asarray(x, dtype=float)
    linear = float(theta @ x)
    if linear <= 0.0:
        return np.zeros_like(theta)
    u = z - linear
    return 0.5 * (np.sign(u) + 2.0 * tau - 1.0) * x


def cqr_theta_star(tau: float, theta_median: np.ndarray) -> np.ndarray:
    """
    Target for quantile level tau.

    The latent response is N(x'theta_median, 4) with x_1 = 1 and censoring is
    monotone, so only the intercept moves: by 2 Phi^-1(tau).
    """
    out = np.array(theta_median, dtype=float)
    out[0] += NOISE_SD * norm.ppf(tau)
    return out


class CqrModel(ModelSpec):
    """Asymmetric Laplace CQR model on Theta = R^d; records are (z, x)."""

    def __init__(
        self,
        tau: float = 0.5,
        dim: int = 5,
        true_param: Optional[np.ndarray] = None,
        prior_shift: float = 10.0,
        prior_var: float = 2.0,
    ):
        if not 0.0 < tau < 1.0:
            raise ValueError("tau must lie in (0, 1)")
        super().__init__(dim, true_param)
        self.tau = tau
        self.prior_shift = prior_shift
        self.prior_var = prior_var
        self._log_norm = math.log(tau * (1.0 - tau))

    def log_density(self, thetas: np.ndarray, y: Any) -> np.ndarray:
        z, x = y
        location = np.maximum(thetas @ x, 0.0)
        return self._log_norm - rho_tau(z - location, self.tau)

    def grad_log_density(self, theta: np.ndarray, y: Any) -> np.ndarray:
        z, x = y
        return cqr_grad(theta, z, x, self.tau)

    def default_prior(self) -> PriorSampler:
        """N(theta_star + shift, var I)."""
        centre = (
            np.zeros(self.dim) if self.true_param is None else self.true_param
        ) + self.prior_shift
        sd = math.sqrt(self.prior_var)

        def sample(rng: RngStream, n: int) -> np.ndarray:
            return centre + sd * rng.normal((n, self.dim))

        return sample


def simulate_cqr_design(dim: int, rng: RngStream) -> Tuple[np.ndarray, np.ndarray]:
    """
    Draw the design: theta_star^(0.5) and the covariate covariance Sigma_X.

    Sigma_X^-1 ~ Wishart(d - 1, I_{d-1}) and theta_star^(0.5) = (3, N(0, I)).
    """
    if dim < 2:
        raise ValueError("CQR design needs dim >= 2")
    k = dim - 1
    precision = np.atleast_2d(
        wishart(df=k, scale=np.eye(k)).rvs(random_state=rng.generator)
    )
    cov = np.linalg.inv(precision)
    theta_median = np.concatenate([[INTERCEPT], rng.normal(k)])
    return theta_median, 0.5 * (cov + cov.T)


def simulate_cqr(
    n: int, rng: RngStream, dim: int = 5, tau: float = 0.5
) -> Dataset:
    """
    Simulate n censored observations Z = max(x'theta_star^(0.5) + 2 eps, 0).

    Args:
        n (int): Number of records.
        rng (RngStream): Random stream; the design is drawn from it first.
        dim (int): Parameter dimension d (intercept included).
        tau (float): Quantile level whose target is stored as theta_star.

    Returns:
        Dataset: Records (z, x) and theta_star^(tau).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    theta_median, cov = simulate_cqr_design(dim, rng)
    chol = np.linalg.cholesky(cov)
    x = np.column_stack([np.ones(n), rng.normal((n, dim - 1)) @ chol.T])
    z = np.maximum(x @ theta_median + NOISE_SD * rng.normal(n), 0.0)
    return Dataset(z, x, cqr_theta_star(tau, theta_median))
