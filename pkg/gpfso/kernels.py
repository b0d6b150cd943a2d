"""
Proposal (jitter) kernels.

- GPFSO: theta + h_{t-1} eps, eps ~ t_{d,nu}(0, Sigma) right after a
  breakpoint and eps ~ N_d(0, Sigma) otherwise.
- GPFSO_MIX: as GPFSO, except that at breakpoints eps comes with probability
  w from a lighter first component (Gaussian, Dirac at 0 or Student-t with
  nu' < nu) and with probability 1 - w from t_{d,nu}.
- KS_PFSO: shrinkage kernel N(s theta + (1 - s) theta_K, iota^2 V_K) with
  s = sqrt(1 - iota^2), which keeps the cloud's mean and covariance.
- JITTER: time-homogeneous kernel, stay put with probability 1 - N^-1/2 and
  add N(0, I) noise otherwise.
"""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from .core.rng import RngStream
from .core.types import ParticleSystem
from .errors import CovarianceNotPSD
from .schedule import Schedule
from .types.config import GpfsoConfig, KernelKind, MixVariant

CHOLESKY_JITTER = 1e-10


class KernelTag(str, Enum):
    """Which kernel produced a batch of proposals."""

    DIRAC = "dirac"
    GAUSSIAN = "gaussian"
    STUDENT = "student"
    MIXTURE = "mixture"
    SHRINKAGE = "shrinkage"
    JITTER = "jitter"


class Proposal:
    """New particle positions plus the tag of the kernel that made them."""

    def __init__(self, particles: np.ndarray, tag: KernelTag):
        self.particles = particles
        self.tag = tag


class KernelState:
    """Strategy parameters, plus the cloud moments for KS_PFSO."""

    def __init__(self, config: GpfsoConfig, dim: int):
        self.kind = config.kernel.kind
        self.c_sigma = config.c_sigma
        self.nu = config.nu
        self.dim = dim
        if config.sigma_diag is not None:
            if len(config.sigma_diag) != dim:
                raise ValueError("sigma_diag must have one entry per dimension")
            self.sigma_diag = np.asarray(config.sigma_diag, dtype=float)
        else:
            self.sigma_diag = np.full(dim, config.c_sigma)
        self.mix_weight = config.kernel.mix_weight
        self.mix_variant = config.kernel.mix_variant
        self.mix_nu = config.kernel.mix_nu
        self.iota = config.kernel.iota
        self.jitter_scale = 1.0
        self.theta_k = np.zeros(dim)
        self.v_k = np.zeros((dim, dim))


def refresh_ks_state(state: KernelState, ps: ParticleSystem) -> None:
    """Set theta_K and V_K to the weighted mean and covariance of `ps`."""
    state.theta_k = ps.mean()
    state.v_k = ps.covariance()


def _gpfso_noise(
    state: KernelState, n: int, heavy: bool, rng: RngStream
) -> Tuple[np.ndarray, KernelTag]:
    d = state.dim
    if not heavy:
        return rng.normal((n, d)), KernelTag.GAUSSIAN
    if state.kind != KernelKind.GPFSO_MIX or state.mix_weight == 0.0:
        # No extra uniform draws here, so w = 0 matches plain GPFSO draw for draw.
        return rng.student_t(state.nu, n, d), KernelTag.STUDENT
    first = rng.uniform(n) < state.mix_weight
    eps = rng.student_t(state.nu, n, d)
    k = int(first.sum())
    if state.mix_variant == MixVariant.GAUSS:
        eps[first] = rng.normal((k, d))
    elif state.mix_variant == MixVariant.DIRAC:
        eps[first] = 0.0
    else:
        eps[first] = rng.student_t(state.mix_nu, k, d)
    return eps, KernelTag.MIXTURE


def propose_gpfso_all(
    state: KernelState, origins: np.ndarray, t: int, sched: Schedule, rng: RngStream
) -> Proposal:
    """
    Move every origin with the GPFSO (or GPFSO_MIX) kernel used to create theta_t.

    Args:
        state (KernelState): Kernel parameters.
        origins (np.ndarray): Resampled particles, shape (N, d).
        t (int): The step being produced; the scale is h_{t-1}.
        sched (Schedule): Breakpoints and learning rate.
        rng (RngStream): Random stream.

    Returns:
        Proposal: Moved particles and the kernel tag.
    """
    h = sched.learning_rate(t - 1)
    if h == 0.0:
        return Proposal(origins.copy(), KernelTag.DIRAC)
    heavy = sched.is_breakpoint(t - 1)
    eps, tag = _gpfso_noise(state, origins.shape[0], heavy, rng)
    return Proposal(origins + h * eps * np.sqrt(state.sigma_diag), tag)


def propose_ks_all(state: KernelState, origins: np.ndarray, rng: RngStream) -> Proposal:
    """Move every origin with the shrinkage kernel, using the state's theta_K, V_K."""
    d = state.dim
    if not np.all(np.isfinite(state.v_k)):
        raise CovarianceNotPSD("particle covariance has non-finite entries")
    try:
        chol = np.linalg.cholesky(state.v_k + CHOLESKY_JITTER * np.eye(d))
    except np.linalg.LinAlgError as e:
        raise CovarianceNotPSD(f"particle covariance is not positive semidefinite: {e}") from e
    shrink = np.sqrt(1.0 - state.iota**2)
    centre = shrink * origins + (1.0 - shrink) * state.theta_k
    z = rng.normal(origins.shape)
    return Proposal(centre + state.iota * z @ chol.T, KernelTag.SHRINKAGE)


def propose_jitter_all(
    origins: np.ndarray, n_particles: int, rng: RngStream, scale: float = 1.0
) -> Proposal:
    """Move each origin with probability N^-1/2 by a N(0, scale^2 I) step."""
    if n_particles < 1:
        raise ValueError("n_particles must be >= 1")
    moved = rng.uniform(origins.shape[0]) < n_particles**-0.5
    out = origins.copy()
    out[moved] += scale * rng.normal((int(moved.sum()), origins.shape[1]))
    return Proposal(out, KernelTag.JITTER)


def propose(
    origin: np.ndarray,
    t: int,
    sched: Schedule,
    rng: RngStream,
    state: KernelState,
) -> np.ndarray:
    """Single-origin GPFSO / GPFSO_MIX proposal producing theta_t."""
    origin = np.asarray(origin, dtype=float).reshape(1, -1)
    return propose_gpfso_all(state, origin, t, sched, rng).particles[0]


def propose_ks(origin: np.ndarray, state: KernelState, rng: RngStream) -> np.ndarray:
    """Single-origin KS_PFSO proposal."""
    origin = np.asarray(origin, dtype=float).reshape(1, -1)
    return propose_ks_all(state, origin, rng).particles[0]


def propose_jitter(origin: np.ndarray, n_particles: int, rng: RngStream) -> np.ndarray:
    """Single-origin jittering proposal."""
    origin = np.asarray(origin, dtype=float).reshape(1, -1)
    return propose_jitter_all(origin, n_particles, rng).particles[0]


class BaseKernel(ABC):
    """Batch proposal interface shared by every kernel family."""

    def __init__(self, config: GpfsoConfig, dim: int, sched: Optional[Schedule] = None):
        self.state = KernelState(config, dim)
        self.sched = sched or Schedule(config.schedule)

    @property
    def kind(self) -> KernelKind:
        return self.state.kind

    def refresh(self, ps: ParticleSystem) -> None:
        """Per-step hook run on the weighted cloud before resampling."""
        pass

    @abstractmethod
    def propose_all(self, origins: np.ndarray, t: int, rng: RngStream) -> Proposal:
        """Move every row of `origins` to produce theta_t."""
        pass


class GpfsoKernel(BaseKernel):
    """GPFSO and GPFSO_MIX."""

    def propose_all(self, origins: np.ndarray, t: int, rng: RngStream) -> Proposal:
        return propose_gpfso_all(self.state, origins, t, self.sched, rng)


class KsKernel(BaseKernel):
    """KS_PFSO shrinkage kernel; needs the cloud moments of step t-1."""

    def refresh(self, ps: ParticleSystem) -> None:
        refresh_ks_state(self.state, ps)

    def propose_all(self, origins: np.ndarray, t: int, rng: RngStream) -> Proposal:
        return propose_ks_all(self.state, origins, rng)


class JitterKernel(BaseKernel):
    def propose_all(self, origins: np.ndarray, t: int, rng: RngStream) -> Proposal:
        return propose_jitter_all(origins, origins.shape[0], rng, self.state.jitter_scale)


_KERNELS = {
    KernelKind.GPFSO: GpfsoKernel,
    KernelKind.GPFSO_MIX: GpfsoKernel,
    KernelKind.KS_PFSO: KsKernel,
    KernelKind.JITTER: JitterKernel,
}


def make_kernel(config: GpfsoConfig, dim: int, sched: Optional[Schedule] = None) -> BaseKernel:
    """Build the kernel object selected by `config.kernel.kind`."""
    return _KERNELS[config.kernel.kind](config, dim, sched)
