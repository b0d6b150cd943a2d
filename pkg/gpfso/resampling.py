"""
Effective sample size and resampling schemes.

Every scheme returns a counts vector: particle n is copied counts[n] times,
sum(counts) = N and E[counts[n]] = N W^n. SSP (Srinivasan sampling process)
additionally keeps each count within one of N W^n.
"""

import logging
from typing import Tuple

import numpy as np

from .core.rng import RngStream
from .core.types import ParticleSystem
from .types.config import ResamplingScheme

logger = logging.getLogger(__name__)


def ess(weights: np.ndarray) -> float:
    """1 / sum(W^2) for normalised weights; lies in [1, N]."""
    return float(1.0 / np.sum(np.square(weights)))


def ssp_resample(weights: np.ndarray, rng: RngStream) -> np.ndarray:
    """
    Srinivasan sampling process resampling.

    Starting from the fractional parts of N W^n, pairs of fractional entries
    are merged: mass moves from one to the other in a randomised direction
    chosen so that each expectation is preserved, until one of the pair is
    integral. After N - 1 merges every entry is integral.

    Args:
        weights (np.ndarray): Normalised weights, length N.
        rng (RngStream): Random stream (N - 1 uniforms are drawn).

    Returns:
        np.ndarray: Counts with counts[n] in {floor(N W^n), ceil(N W^n)}.
    """
    n = weights.shape[0]
    expected = n * np.asarray(weights, dtype=float)
    counts = np.floor(expected).astype(np.int64)
    frac = (expected - counts).tolist()
    u = rng.uniform(n - 1).tolist() if n > 1 else []
    extra = [0] * n
    i = 0
    for j in range(1, n):
        xi, xj = frac[i], frac[j]
        up = min(1.0 - xi, xj)  # i gains, j loses
        down = min(xi, 1.0 - xj)  # i loses, j gains
        total = up + down
        if total > 0.0 and u[j - 1] < down / total:
            if up == 1.0 - xi:
                frac[j] = xj - up
                extra[i] = 1
                i = j
            else:
                frac[i] = xi + up
                frac[j] = 0.0
        else:
            if down == xi:
                frac[j] = xj + down
                i = j
            else:
                frac[i] = xi - down
                frac[j] = 1.0
                extra[j] = 1
    # The survivor's fraction is 0 or 1 up to round-off.
    extra[i] = 1 if frac[i] > 0.5 else 0
    counts += np.asarray(extra, dtype=np.int64)
    missing = n - int(counts.sum())
    if missing != 0:
        # Round-off only; push the correction onto the largest residual.
        k = int(np.argmax(expected - np.floor(expected))) if missing > 0 else int(np.argmax(counts))
        counts[k] += missing
    return counts


def multinomial_resample(weights: np.ndarray, rng: RngStream) -> np.ndarray:
    """Counts ~ Multinomial(N, W)."""
    n = weights.shape[0]
    p = np.asarray(weights, dtype=float)
    return rng.generator.multinomial(n, p / p.sum()).astype(np.int64)


def systematic_resample(weights: np.ndarray, rng: RngStream) -> np.ndarray:
    """One uniform, N evenly spaced points through the weight CDF."""
    n = weights.shape[0]
    points = (np.arange(n) + rng.uniform()) / n
    cdf = np.cumsum(weights)
    cdf[-1] = 1.0
    idx = np.searchsorted(cdf, points, side="right")
    return np.bincount(np.minimum(idx, n - 1), minlength=n).astype(np.int64)


def counts_to_assignment(counts: np.ndarray) -> np.ndarray:
    """Index vector in which particle n appears exactly counts[n] times."""
    return np.repeat(np.arange(counts.shape[0]), counts)


_SCHEMES = {
    ResamplingScheme.SSP: ssp_resample,
    ResamplingScheme.MULTINOMIAL: multinomial_resample,
    ResamplingScheme.SYSTEMATIC: systematic_resample,
}


def resample_counts(
    weights: np.ndarray, rng: RngStream, scheme: ResamplingScheme = ResamplingScheme.SSP
) -> np.ndarray:
    return _SCHEMES[ResamplingScheme(scheme)](weights, rng)


def maybe_resample(
    ps: ParticleSystem,
    c_ess: float,
    rng: RngStream,
    scheme: ResamplingScheme = ResamplingScheme.SSP,
) -> Tuple[bool, np.ndarray]:
    """
    Resample when ESS <= N c_ess.

    On resampling the particle system is replaced by the equally weighted
    resampled cloud and its running log-weights are reset to 0; otherwise it
    is left untouched.

    Args:
        ps (ParticleSystem): The system at step t-1 (normalised weights).
        c_ess (float): Threshold fraction in (0, 1].
        rng (RngStream): Random stream.
        scheme (ResamplingScheme): Resampling algorithm.

    Returns:
        Tuple[bool, np.ndarray]: (resampled, theta_hat) where theta_hat has
            shape (N, d).
    """
    n = ps.n_particles
    current = ess(ps.weights)
    if current > n * c_ess:
        return False, ps.particles
    counts = resample_counts(ps.weights, rng, scheme)
    theta_hat = ps.particles[counts_to_assignment(counts)]
    logger.debug("resampled: ess=%.3f threshold=%.3f", current, n * c_ess)
    ps.particles = theta_hat
    ps.log_weights = np.zeros(n)
    ps.weights = np.full(n, 1.0 / n)
    ps.log_normalizer = float(np.log(n))
    return True, theta_hat
