"""
Convergence-rate fits and success frequencies.
"""

import logging
from typing import Sequence

import numpy as np

from ..errors import InsufficientPoints
from ..types.experiment import SlopeFit

logger = logging.getLogger(__name__)

MIN_POINTS = 10


def fit_slope(
    times: Sequence[float],
    errors: Sequence[float],
    t_lo: int,
    t_hi: int,
) -> SlopeFit:
    """
    Fit log(error_t) = beta1 - beta2 log(t) + eps_t by least squares.

    Rows outside [t_lo, t_hi] are ignored; rows inside with a non-positive
    (or NaN) error are skipped and counted.

    Args:
        times (Sequence[float]): Step indices.
        errors (Sequence[float]): Error at each step.
        t_lo (int): Window start.
        t_hi (int): Window end.

    Returns:
        SlopeFit: Coefficients, residual standard error and point counts.

    Raises:
        InsufficientPoints: If fewer than 10 usable rows remain.
    """
    if t_lo >= t_hi:
        raise ValueError("window must satisfy t_lo < t_hi")
    times = np.asarray(times, dtype=float)
    errors = np.asarray(errors, dtype=float)
    inside = (times >= t_lo) & (times <= t_hi)
    usable = inside & (errors > 0)
    skipped = int(inside.sum() - usable.sum())
    n = int(usable.sum())
    if n < MIN_POINTS:
        raise InsufficientPoints(
            f"{n} usable rows in [{t_lo}, {t_hi}] ({skipped} skipped); need {MIN_POINTS}"
        )
    if skipped:
        logger.debug("fit_slope skipped %d non-positive rows", skipped)
    log_t = np.log(times[usable])
    log_e = np.log(errors[usable])
    design = np.column_stack([np.ones(n), log_t])
    coef, _, _, _ = np.linalg.lstsq(design, log_e, rcond=None)
    resid = log_e - design @ coef
    dof = max(n - 2, 1)
    return SlopeFit(
        beta1=float(coef[0]),
        beta2=float(-coef[1]),
        residual_se=float(np.sqrt(resid @ resid / dof)),
        n_points=n,
        n_skipped=skipped,
        t_lo=int(t_lo),
        t_hi=int(t_hi),
    )


def success_rate(final_errors: Sequence[float], threshold: float) -> float:
    """
    Fraction of runs whose final error is strictly below `threshold`.

    Args:
        final_errors (Sequence[float]): One final error per run, already in
            the chosen norm.
        threshold (float): Success threshold.

    Returns:
        float: A value in [0, 1].
    """
    errors = np.asarray(final_errors, dtype=float)
    if errors.size == 0:
        raise ValueError("final_errors must be nonempty")
    return float(np.mean(errors < threshold))
