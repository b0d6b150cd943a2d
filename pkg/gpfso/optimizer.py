"""
The particle filter stochastic optimizer.

Each step runs, in this order: ESS check on the previous weights, optional
resampling, one kernel move per particle, the weight update
w_t = w_{t-1} f_theta(y_t) with zero weight outside Theta, normalisation,
then the weighted mean theta_tilde_t and its running average theta_bar_t.
"""

import logging
from typing import Any, Callable, Iterable, Optional

import numpy as np

from .core.model import ModelSpec, PriorSampler
from .core.rng import RngStream
from .core.types import ParticleSystem
from .errors import AllWeightsZero
from .kernels import BaseKernel, make_kernel
from .resampling import maybe_resample
from .schedule import Schedule
from .types.config import GpfsoConfig
from .types.experiment import StepInfo
from .types.trace import RecordPlan, Trace, make_row

logger = logging.getLogger(__name__)

StepCallback = Callable[[StepInfo], None]


class OptimizerState:
    """Mutable state of one run. Owned by a single Gpfso instance."""

    def __init__(
        self,
        ps: ParticleSystem,
        schedule: Schedule,
        kernel: BaseKernel,
        rng: RngStream,
    ):
        self.ps = ps
        self.step = 0
        self.theta_tilde = np.zeros(ps.dim)
        self.bar = np.zeros(ps.dim)
        self.bar_count = 0
        self.schedule = schedule
        self.kernel = kernel
        self.rng = rng
        self.resampled = False
        self.last_tag: Optional[str] = None

    @property
    def ess(self) -> float:
        return self.ps.ess()


class Gpfso:
    """
    Global particle filter stochastic optimizer.

    Args:
        model (ModelSpec): Objective, as a family of log-densities.
        config (GpfsoConfig): Optimizer settings, seed included.
        prior (PriorSampler, optional): Draws N initial particles; defaults
            to the model's own prior.
        schedule (Schedule, optional): Overrides the schedule built from
            `config.schedule`.
        on_step (Callable[[StepInfo], None], optional): Called after every
            step.
    """

    def __init__(
        self,
        model: ModelSpec,
        config: Optional[GpfsoConfig] = None,
        prior: Optional[PriorSampler] = None,
        schedule: Optional[Schedule] = None,
        on_step: Optional[StepCallback] = None,
    ):
        self.model = model
        self.config = config or GpfsoConfig()
        self.prior = prior if prior is not None else model.default_prior()
        self.schedule = schedule or Schedule(self.config.schedule)
        self.on_step = on_step
        self._state: Optional[OptimizerState] = None

    @property
    def state(self) -> OptimizerState:
        if self._state is None:
            raise RuntimeError("optimizer has not been initialised; call init() first")
        return self._state

    def _increment(self, particles: np.ndarray, y: Any) -> np.ndarray:
        """log f_theta(y) per particle, -inf outside the support."""
        inside = np.asarray(self.model.in_support(particles), dtype=bool)
        out = np.full(particles.shape[0], -np.inf)
        if inside.any():
            values = np.asarray(self.model.log_density(particles[inside], y), dtype=float)
            if np.any(values == np.inf):
                raise ValueError("log_density returned +inf")
            out[inside] = np.where(np.isnan(values), -np.inf, values)
        return out

    def _update_average(self, state: OptimizerState, t: int) -> None:
        burn_in = self.config.burn_in
        if burn_in > 0 and t == burn_in + 1:
            state.bar_count = 0
        state.bar_count += 1
        state.bar = state.bar + (state.theta_tilde - state.bar) / state.bar_count

    def _notify(self, state: OptimizerState) -> None:
        if self.on_step is not None:
            self.on_step(
                StepInfo(
                    t=state.step,
                    kernel_tag=state.last_tag,
                    ess=state.ess,
                    resampled=state.resampled,
                )
            )

    def init(self, y1: Any) -> OptimizerState:
        """
        Draw N prior particles and weight them by f_theta(y1).

        Args:
            y1 (Any): The first observation.

        Returns:
            OptimizerState: State at t = 1.

        Raises:
            AllWeightsZero: If no prior draw has positive density at y1.
        """
        cfg = self.config
        rng = RngStream(cfg.seed)
        particles = np.asarray(self.prior(rng, cfg.n_particles), dtype=float)
        if particles.ndim == 1:
            particles = particles.reshape(-1, 1)
        if particles.shape != (cfg.n_particles, self.model.dim):
            raise ValueError(
                f"prior returned shape {particles.shape}, "
                f"expected {(cfg.n_particles, self.model.dim)}"
            )
        lw = self._increment(particles, y1)
        try:
            ps = ParticleSystem.from_particles(particles, lw)
        except AllWeightsZero as e:
            raise e.at_step(1) from e
        kernel = make_kernel(cfg, self.model.dim, self.schedule)
        state = OptimizerState(ps, self.schedule, kernel, rng)
        state.step = 1
        state.theta_tilde = ps.mean()
        self._update_average(state, 1)
        self._state = state
        logger.debug("initialised %d particles in dimension %d", cfg.n_particles, self.model.dim)
        self._notify(state)
        return state

    def step(self, y: Any) -> OptimizerState:
        """
        Advance the filter by one observation.

        Args:
            y (Any): Observation y_t.

        Returns:
            OptimizerState: State at t.

        Raises:
            AllWeightsZero: If every proposal lands outside Theta or at zero
                density; the error carries t.
        """
        state = self.state
        cfg = self.config
        t = state.step + 1
        ps = state.ps
        state.kernel.refresh(ps)
        state.resampled, origins = maybe_resample(ps, cfg.c_ess, state.rng, cfg.resampling)
        proposal = state.kernel.propose_all(origins, t, state.rng)
        ps.particles = proposal.particles
        ps.log_weights = ps.log_weights + self._increment(ps.particles, y)
        try:
            ps.normalize()
        except AllWeightsZero as e:
            raise e.at_step(t) from e
        state.step = t
        state.last_tag = proposal.tag.value
        state.theta_tilde = ps.mean()
        self._update_average(state, t)
        self._notify(state)
        return state

    def run(
        self,
        stream: Iterable[Any],
        record_stride: Optional[int] = 1,
        record_factor: float = 1.02,
    ) -> Trace:
        """
        Consume a stream: init on the first observation, step on the rest.

        Args:
            stream (Iterable[Any]): Observations; must yield at least one.
            record_stride (int, optional): Record every k-th step. None
                selects geometric spacing by `record_factor`.
            record_factor (float): Geometric spacing factor.

        Returns:
            Trace: Recorded rows, always including the final step.
        """
        plan = RecordPlan(record_stride, record_factor)
        target = self.model.true_param
        trace = Trace(dim=self.model.dim)
        last_recorded = 0
        state = None
        for y in stream:
            state = self.init(y) if state is None else self.step(y)
            if plan.wants(state.step):
                trace.rows.append(self._row(state, target))
                last_recorded = state.step
        if state is None:
            raise ValueError("stream yielded no observations")
        if last_recorded != state.step:
            trace.rows.append(self._row(state, target))
        logger.info(
            "run finished at t=%d, theta_bar=%s", state.step, np.array2string(state.bar, precision=4)
        )
        return trace

    @staticmethod
    def _row(state: OptimizerState, target: Optional[np.ndarray]):
        return make_row(
            state.step, state.theta_tilde, state.bar, state.ess, state.resampled, target
        )


def init(
    model: ModelSpec, prior_sampler: Optional[PriorSampler], cfg: GpfsoConfig, y1: Any
) -> Gpfso:
    """Functional form of Gpfso.init; returns the engine holding the state."""
    engine = Gpfso(model, cfg, prior_sampler)
    engine.init(y1)
    return engine


def run(
    model: ModelSpec,
    prior_sampler: Optional[PriorSampler],
    stream: Iterable[Any],
    cfg: Optional[GpfsoConfig] = None,
    record_stride: Optional[int] = 1,
    on_step: Optional[StepCallback] = None,
) -> Trace:
    """
    Run the optimizer over a whole stream.

    Args:
        model (ModelSpec): Objective.
        prior_sampler (PriorSampler, optional): Initial distribution; the
            model's default prior when None.
        stream (Iterable[Any]): Observations.
        cfg (GpfsoConfig, optional): Optimizer settings.
        record_stride (int, optional): Recording stride; None for geometric.
        on_step (Callable, optional): Per-step callback.

    Returns:
        Trace: The recorded estimators.
    """
    engine = Gpfso(model, cfg, prior_sampler, on_step=on_step)
    return engine.run(stream, record_stride=record_stride)
