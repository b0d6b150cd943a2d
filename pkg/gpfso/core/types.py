"""
Core types for the particle system.
"""

from typing import Tuple

import numpy as np

from ..errors import AllWeightsZero


def normalize_weights(log_weights: np.ndarray) -> Tuple[np.ndarray, float]:
    """
    Turn running log-weights into normalised weights.

    Args:
        log_weights (np.ndarray): Unnormalised log-weights; -inf marks a
            zero weight.

    A finite log-weight more than about 745 below the maximum underflows to
    a weight of exactly 0. Such a particle is still alive: its log-weight
    stays finite and it can regain mass at later steps.

    Returns:
        Tuple[np.ndarray, float]: (weights summing to 1, log normaliser),
            where the log normaliser is log(sum(exp(log_weights))).

    Raises:
        AllWeightsZero: If every entry is -inf.
    """
    log_weights = np.asarray(log_weights, dtype=float)
    top = np.max(log_weights)
    if not np.isfinite(top):
        if top == np.inf:
            raise ValueError("log-weights must not contain +inf")
        raise AllWeightsZero()
    shifted = np.exp(log_weights - top)
    total = shifted.sum()
    return shifted / total, float(top + np.log(total))


def weighted_mean(particles: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Componentwise sum of W^n theta^n."""
    return weights @ particles


def weighted_covariance(
    particles: np.ndarray, weights: np.ndarray, mean: np.ndarray
) -> np.ndarray:
    """Sum of W^n (theta^n - mean)(theta^n - mean)^T."""
    centred = particles - mean
    cov = (centred * weights[:, None]).T @ centred
    return 0.5 * (cov + cov.T)


class ParticleSystem:
    """
    N weighted points in R^d.

    `log_weights` holds the running unnormalised log w_t^n and `weights` the
    normalised W_t^n. The system is single-owner mutable state: the optimizer
    updates it in place each step.
    """

    def __init__(self, particles: np.ndarray, log_weights: np.ndarray):
        particles = np.asarray(particles, dtype=float)
        if particles.ndim != 2:
            raise ValueError("particles must be an (N, d) array")
        log_weights = np.asarray(log_weights, dtype=float)
        if log_weights.shape != (particles.shape[0],):
            raise ValueError("log_weights must have one entry per particle")
        self.particles = particles
        self.log_weights = log_weights
        self.weights = np.zeros_like(log_weights)
        self.log_normalizer = 0.0
        self.normalize()

    @classmethod
    def from_particles(cls, particles: np.ndarray, log_weights: np.ndarray) -> "ParticleSystem":
        """Build a normalised system from particles and unnormalised log-weights."""
        return cls(particles, log_weights)

    @classmethod
    def uniform(cls, particles: np.ndarray) -> "ParticleSystem":
        """Equally weighted system."""
        particles = np.asarray(particles, dtype=float)
        return cls(particles, np.zeros(particles.shape[0]))

    @property
    def n_particles(self) -> int:
        return self.particles.shape[0]

    @property
    def dim(self) -> int:
        return self.particles.shape[1]

    def normalize(self) -> None:
        """Recompute `weights` and re-centre `log_weights` by their maximum."""
        self.weights, self.log_normalizer = normalize_weights(self.log_weights)
        # Re-centring leaves the normalised weights unchanged.
        self.log_weights = self.log_weights - np.max(self.log_weights)

    def mean(self) -> np.ndarray:
        return weighted_mean(self.particles, self.weights)

    def covariance(self) -> np.ndarray:
        return weighted_covariance(self.particles, self.weights, self.mean())

    def ess(self) -> float:
        return float(1.0 / np.sum(self.weights**2))
