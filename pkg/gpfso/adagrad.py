"""
Adagrad baseline: per-coordinate adaptive stochastic gradient ascent on
log f_theta(y_t).
"""

import logging
from typing import Any, Callable, Iterable, Optional

import numpy as np

from .errors import NonFiniteGradient
from .types.trace import RecordPlan, Trace, make_row

logger = logging.getLogger(__name__)

GradientFn = Callable[[np.ndarray, Any], np.ndarray]

DEFAULT_EPSILON = 1e-8


class AdagradState:
    """Iterate, squared-gradient accumulator and step constants."""

    def __init__(self, theta0: np.ndarray, step_size: float = 1.0, epsilon: float = DEFAULT_EPSILON):
        if step_size <= 0:
            raise ValueError("step_size must be positive")
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")
        self.theta = np.array(theta0, dtype=float).reshape(-1)
        self.accumulator = np.zeros_like(self.theta)
        self.step_size = step_size
        self.epsilon = epsilon
        self.t = 0
        self.bar = self.theta.copy()

    def update(self, grad: np.ndarray) -> None:
        """One ascent step: theta += step * g / sqrt(G + eps)."""
        grad = np.asarray(grad, dtype=float).reshape(-1)
        self.t += 1
        if not np.all(np.isfinite(grad)):
            raise NonFiniteGradient("gradient is not finite", t=self.t)
        self.accumulator += grad**2
        self.theta = self.theta + self.step_size * grad / np.sqrt(self.accumulator + self.epsilon)
        self.bar = self.bar + (self.theta - self.bar) / self.t


def adagrad_run(
    model_grad: GradientFn,
    theta0: np.ndarray,
    stream: Iterable[Any],
    step_size: float = 1.0,
    epsilon: float = DEFAULT_EPSILON,
    target: Optional[np.ndarray] = None,
    record_stride: Optional[int] = 1,
    record_factor: float = 1.02,
) -> Trace:
    """
    Run Adagrad over a stream.

    The trace stores the iterate after step t as theta_tilde and the running
    average of iterates as theta_bar.

    Args:
        model_grad (Callable): (theta, y) -> gradient of log f_theta(y).
        theta0 (np.ndarray): Starting point.
        stream (Iterable[Any]): Observations.
        step_size (float): Base step size.
        epsilon (float): Accumulator regulariser.
        target (np.ndarray, optional): Reference point for error columns.
        record_stride (int, optional): Recording stride; None for geometric.
        record_factor (float): Geometric spacing factor.

    Returns:
        Trace: Recorded iterates.

    Raises:
        NonFiniteGradient: If a gradient contains NaN or inf.
    """
    state = AdagradState(theta0, step_size, epsilon)
    plan = RecordPlan(record_stride, record_factor)
    trace = Trace(dim=state.theta.shape[0])
    last_recorded = 0
    for y in stream:
        state.update(model_grad(state.theta, y))
        if plan.wants(state.t):
            trace.rows.append(make_row(state.t, state.theta, state.bar, None, False, target))
            last_recorded = state.t
    if state.t == 0:
        raise ValueError("stream yielded no observations")
    if last_recorded != state.t:
        trace.rows.append(make_row(state.t, state.theta, state.bar, None, False, target))
    logger.info("adagrad finished at t=%d", state.t)
    return trace
