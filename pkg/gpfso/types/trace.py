from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field


class TraceRow(BaseModel):
    """Estimators recorded at one step."""

    t: int = Field(..., ge=1, description="Step index")
    theta_tilde: List[float] = Field(..., description="Weighted particle mean")
    theta_bar: List[float] = Field(..., description="Running average of theta_tilde")
    ess: Optional[float] = Field(None, description="Effective sample size after the update")
    resampled: bool = Field(False, description="Whether this step started with a resampling")
    err_tilde_l2: Optional[float] = None
    err_bar_l2: Optional[float] = None
    err_tilde_max: Optional[float] = None
    err_bar_max: Optional[float] = None


class Trace(BaseModel):
    """Recorded rows of one run."""

    dim: int = Field(..., ge=1)
    rows: List[TraceRow] = Field(default_factory=list)

    @property
    def final(self) -> TraceRow:
        return self.rows[-1]

    @property
    def times(self) -> np.ndarray:
        return np.array([row.t for row in self.rows], dtype=np.int64)

    def theta_tilde(self) -> np.ndarray:
        return np.array([row.theta_tilde for row in self.rows], dtype=float)

    def theta_bar(self) -> np.ndarray:
        return np.array([row.theta_bar for row in self.rows], dtype=float)

    def column(self, name: str) -> np.ndarray:
        """One scalar column as floats (None becomes NaN)."""
        return np.array(
            [np.nan if getattr(row, name) is None else getattr(row, name) for row in self.rows],
            dtype=float,
        )

    def columns(self) -> List[str]:
        """CSV header, in file order."""
        tilde = [f"theta_tilde_{i + 1}" for i in range(self.dim)]
        bar = [f"theta_bar_{i + 1}" for i in range(self.dim)]
        return (
            ["t"]
            + tilde
            + bar
            + ["ess", "resampled", "err_tilde_l2", "err_bar_l2", "err_tilde_max", "err_bar_max"]
        )


def error_norms(estimate: np.ndarray, target: Optional[np.ndarray]):
    """(l2, max) distance to the target, or (None, None) without a target."""
    if target is None:
        return None, None
    diff = np.asarray(estimate, dtype=float) - target
    return float(np.linalg.norm(diff)), float(np.max(np.abs(diff)))


def make_row(
    t: int,
    theta_tilde: np.ndarray,
    theta_bar: np.ndarray,
    ess: Optional[float],
    resampled: bool,
    target: Optional[np.ndarray],
) -> TraceRow:
    tilde_l2, tilde_max = error_norms(theta_tilde, target)
    bar_l2, bar_max = error_norms(theta_bar, target)
    return TraceRow(
        t=t,
        theta_tilde=[float(v) for v in theta_tilde],
        theta_bar=[float(v) for v in theta_bar],
        ess=ess,
        resampled=resampled,
        err_tilde_l2=tilde_l2,
        err_bar_l2=bar_l2,
        err_tilde_max=tilde_max,
        err_bar_max=bar_max,
    )


class RecordPlan:
    """
    Which steps make it into a Trace.

    With a stride k the recorded steps are 1, 1 + k, 1 + 2k, ...; otherwise
    they are spaced geometrically by `factor` starting at 1. Callers always
    add the final step themselves.
    """

    def __init__(self, stride: Optional[int] = None, factor: float = 1.02):
        if stride is not None and stride < 1:
            raise ValueError("record stride must be >= 1")
        if factor <= 1.0:
            raise ValueError("record factor must be > 1")
        self.stride = stride
        self.factor = factor
        self._next = 1

    def wants(self, t: int) -> bool:
        if self.stride is not None:
            return (t - 1) % self.stride == 0
        if t < self._next:
            return False
        self._next = max(self._next + 1, int(np.ceil(self._next * self.factor)))
        return True
