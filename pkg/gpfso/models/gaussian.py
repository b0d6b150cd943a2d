"""
Gaussian mean model N(theta, 1) and its exact recursion.

With a N(theta_0, sigma_0^2) prior and Gaussian jitter of scale h_{t-1}, the
target distribution stays Gaussian with mean theta_t and variance sigma_t^2:

    sigma_t^2 = g(sigma_{t-1}^2 + h_{t-1}^2),  g(x) = x / (1 + x)
    theta_t   = theta_{t-1} + sigma_t^2 (y_t - theta_{t-1})

with h_0 = 0, which makes the recursion an oracle for the particle engine.
"""

import math
from typing import Any, Iterable, Optional, Tuple

import numpy as np
from scipy.stats import norm

from ..core.model import ModelSpec, PriorSampler
from ..core.rng import RngStream
from .dataset import Dataset

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


class GaussianMeanModel(ModelSpec):
    """Unit-variance Gaussian location model on Theta = R."""

    def __init__(
        self,
        true_param: float = 0.0,
        prior_mean: float = 0.0,
        prior_var: float = 25.0,
    ):
        super().__init__(1, np.array([true_param]))
        self.prior_mean = prior_mean
        self.prior_var = prior_var

    def log_density(self, thetas: np.ndarray, y: Any) -> np.ndarray:
        return -LOG_SQRT_2PI - 0.5 * (float(y) - thetas[:, 0]) ** 2

    def grad_log_density(self, theta: np.ndarray, y: Any) -> np.ndarray:
        return np.asarray(float(y) - np.asarray(theta, dtype=float)).reshape(1)

    def default_prior(self) -> PriorSampler:
        mean, sd = self.prior_mean, math.sqrt(self.prior_var)

        def sample(rng: RngStream, n: int) -> np.ndarray:
            return mean + sd * rng.normal((n, 1))

        return sample


def simulate_gaussian(n: int, rng: RngStream, theta_star: float = 0.0) -> Dataset:
    """n draws from N(theta_star, 1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Dataset(theta_star + rng.normal(n), theta_star=np.array([theta_star]))


def g(x: float) -> float:
    return x / (1.0 + x)


class GaussianOracle:
    """Exact state of the Gaussian recursion after step t."""

    def __init__(
        self,
        theta_tilde: float = 0.0,
        sigma2: float = 25.0,
        alpha: float = 0.5,
        t: int = 0,
        theta_bar: Optional[float] = None,
    ):
        if sigma2 <= 0:
            raise ValueError("sigma2 must be positive")
        self.theta_tilde = theta_tilde
        self.sigma2 = sigma2
        self.alpha = alpha
        self.t = t
        self.theta_bar = theta_tilde if theta_bar is None else theta_bar

    @property
    def sd(self) -> float:
        return math.sqrt(self.sigma2)

    def h(self, t: int) -> float:
        return 0.0 if t == 0 else t ** (-self.alpha)


def oracle_step(prev: GaussianOracle, y_t: float, t: int) -> GaussianOracle:
    """
    Advance the recursion to step t.

    Args:
        prev (GaussianOracle): State at t - 1.
        y_t (float): Observation.
        t (int): The step being produced, >= 1.

    Returns:
        GaussianOracle: State at t, with theta_bar the running mean of
            theta_tilde over steps 1..t.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    sigma2 = g(prev.sigma2 + prev.h(t - 1) ** 2)
    theta = prev.theta_tilde + sigma2 * (y_t - prev.theta_tilde)
    bar = theta if t == 1 else prev.theta_bar + (theta - prev.theta_bar) / t
    return GaussianOracle(theta, sigma2, prev.alpha, t, bar)


def run_oracle(
    ys: Iterable[float],
    alpha: float = 0.5,
    theta0: float = 0.0,
    sigma2_0: float = 25.0,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Run the recursion over a whole sequence.

    Args:
        ys (Iterable[float]): Observations y_1, y_2, ...
        alpha (float): Learning-rate exponent.
        theta0 (float): Prior mean.
        sigma2_0 (float): Prior variance.

    Returns:
        Tuple[np.ndarray, np.ndarray, np.ndarray]: theta_tilde_t, sigma_t^2
            and theta_bar_t for t = 1..T.
    """
    ys = np.asarray(list(ys) if not isinstance(ys, np.ndarray) else ys, dtype=float).tolist()
    n = len(ys)
    tilde = [0.0] * n
    var = [0.0] * n
    theta, sigma2 = theta0, sigma2_0
    for i, y in enumerate(ys):
        h2 = 0.0 if i == 0 else i ** (-2.0 * alpha)
        s = sigma2 + h2
        sigma2 = s / (1.0 + s)
        theta += sigma2 * (y - theta)
        tilde[i] = theta
        var[i] = sigma2
    tilde_arr = np.asarray(tilde)
    bar = np.cumsum(tilde_arr) / np.arange(1, n + 1)
    return tilde_arr, np.asarray(var), bar


def folded_normal_mean(mean: np.ndarray, var: np.ndarray) -> np.ndarray:
    """E|X| for X ~ N(mean, var), elementwise; var = 0 gives |mean|."""
    mean = np.asarray(mean, dtype=float)
    sd = np.sqrt(np.asarray(var, dtype=float))
    safe = np.where(sd > 0, sd, 1.0)
    folded = sd * np.sqrt(2.0 / np.pi) * np.exp(-0.5 * (mean / safe) ** 2) + mean * (
        1.0 - 2.0 * norm.cdf(-mean / safe)
    )
    return np.where(sd > 0, folded, np.abs(mean))


def oracle_expected_errors(
    n: int,
    alpha: float = 0.5,
    theta0: float = 0.0,
    sigma2_0: float = 25.0,
    theta_star: float = 0.0,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Exact E|theta_tilde_t - theta_star| and E|theta_bar_t - theta_star| for
    t = 1..n when y_t ~ N(theta_star, 1) i.i.d.

    The recursion is linear in the observations, so both errors are Gaussian.
    The variance of theta_tilde follows v_t = (1 - s_t)^2 v_{t-1} + s_t^2 with
    s_t = sigma_t^2; the running sum S_t of theta_tilde carries
    c_t = Cov(S_t, theta_tilde_t) to update Var(S_t).

    Args:
        n (int): Horizon T.
        alpha (float): Learning-rate exponent.
        theta0 (float): Prior mean.
        sigma2_0 (float): Prior variance.
        theta_star (float): Mean of the observations.

    Returns:
        Tuple[np.ndarray, np.ndarray]: Expected absolute errors of
            theta_tilde_t and theta_bar_t.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    mean_tilde = np.empty(n)
    var_tilde = np.empty(n)
    mean_sum = np.empty(n)
    var_sum = np.empty(n)
    sigma2 = sigma2_0
    m, v = theta0 - theta_star, 0.0
    msum = vsum = cov = 0.0
    for i in range(n):
        h2 = 0.0 if i == 0 else i ** (-2.0 * alpha)
        x = sigma2 + h2
        sigma2 = x / (1.0 + x)
        keep = 1.0 - sigma2
        m = keep * m
        v = keep * keep * v + sigma2 * sigma2
        # Cov(S_{t-1}, theta_tilde_t); y_t is independent of the past.
        cross = keep * cov
        vsum += 2.0 * cross + v
        cov = cross + v
        msum += m
        mean_tilde[i], var_tilde[i] = m, v
        mean_sum[i], var_sum[i] = msum, vsum
    t = np.arange(1, n + 1, dtype=float)
    return (
        folded_normal_mean(mean_tilde, var_tilde),
        folded_normal_mean(mean_sum / t, var_sum / t**2),
    )
