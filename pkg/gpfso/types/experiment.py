from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from .config import GpfsoConfig


class ModelName(str, Enum):
    """Built-in benchmark models."""

    GAUSSIAN = "gaussian"
    CQR = "cqr"
    MULTIMODAL = "multimodal"
    SAGM = "sagm"
    BIMODAL = "bimodal"


class ErrorNorm(str, Enum):
    """Norm used for success rates and the headline slope."""

    EUCLIDEAN = "euclidean"
    MAX = "max"


class Algorithm(str, Enum):
    """Estimator driven by the experiment runner."""

    PARTICLE = "particle"
    ADAGRAD = "adagrad"


# Models that provide grad_log_density.
GRADIENT_MODELS = (ModelName.GAUSSIAN, ModelName.CQR)


class ExperimentConfig(BaseModel):
    """One benchmark experiment: model, optimizer settings and harness options."""

    model: ModelName = Field(ModelName.GAUSSIAN, description="Benchmark model")
    tau: float = Field(0.5, gt=0.0, lt=1.0, description="CQR quantile level")
    dim: Optional[int] = Field(
        None, ge=1, description="Parameter dimension (CQR, multimodal); model default if unset"
    )
    k: int = Field(2, ge=2, description="SAGM mixture components")
    dx: int = Field(4, ge=1, description="SAGM covariate count, intercept included")
    bimodal_gap: float = Field(4.0, gt=0.0, description="Distance L between the toy's two modes")
    prior_shift: Optional[float] = Field(
        None, description="Prior mean offset from the model default"
    )
    prior_var: Optional[float] = Field(None, gt=0.0, description="Prior variance override")
    gpfso: GpfsoConfig = Field(default_factory=GpfsoConfig)
    algorithm: Algorithm = Field(Algorithm.PARTICLE)
    adagrad_step: float = Field(1.0, gt=0.0, description="Adagrad base step size")
    n_obs: int = Field(10_000, ge=1, description="Stream length T")
    replications: int = Field(1, ge=1, description="Number of seeded runs R")
    record_stride: Optional[int] = Field(
        None, ge=1, description="Record every k-th step; geometric spacing if unset"
    )
    record_factor: float = Field(1.02, gt=1.0, description="Geometric recording factor")
    output_dir: str = Field("results", description="Directory for CSV and summary files")
    error_norm: ErrorNorm = Field(ErrorNorm.EUCLIDEAN)
    slope_lo: Optional[int] = Field(None, ge=1, description="Slope window start, default T/100")
    slope_hi: Optional[int] = Field(None, ge=1, description="Slope window end, default T")
    thresholds: List[float] = Field(
        default_factory=lambda: [0.1], description="Success thresholds on the final error"
    )
    workers: int = Field(1, ge=1, description="Replication worker processes")
    data_seed: Optional[int] = Field(
        None, ge=0, lt=2**64, description="Share one simulated dataset across replications"
    )
    bootstrap: bool = Field(False, description="Stream bootstrap draws from a finite dataset")
    dataset_size: Optional[int] = Field(None, ge=1, description="Size of the finite dataset")
    data_file: Optional[str] = Field(None, description="CSV dataset to stream instead of simulating")

    @model_validator(mode="after")
    def check_consistency(self):
        """Cross-field invariants."""
        lo, hi = self.window()
        if lo >= hi and self.n_obs > 1:
            raise ValueError("slope window must satisfy slope_lo < slope_hi")
        if any(v <= 0 for v in self.thresholds):
            raise ValueError("thresholds must be positive")
        if self.bootstrap and self.dataset_size is None and self.data_file is None:
            raise ValueError("bootstrap needs dataset_size or data_file")
        if self.algorithm == Algorithm.ADAGRAD and self.model not in GRADIENT_MODELS:
            raise ValueError(
                f"adagrad needs a model with gradients: {[m.value for m in GRADIENT_MODELS]}"
            )
        return self

    @property
    def seed(self) -> int:
        return self.gpfso.seed

    def window(self) -> Tuple[int, int]:
        """Slope window, with defaults [T/100, T]."""
        hi = self.slope_hi if self.slope_hi is not None else self.n_obs
        lo = self.slope_lo if self.slope_lo is not None else max(1, self.n_obs // 100)
        return lo, hi


class SlopeFit(BaseModel):
    """OLS fit of log(error_t) = beta1 - beta2 log(t) + eps_t."""

    beta1: float = Field(..., description="Intercept")
    beta2: float = Field(..., description="Convergence rate (negated slope)")
    residual_se: float = Field(..., ge=0.0, description="Residual standard error")
    n_points: int = Field(..., ge=10, description="Rows used")
    n_skipped: int = Field(0, ge=0, description="Rows in the window with error <= 0")
    t_lo: int
    t_hi: int

    def __str__(self) -> str:
        return self.model_dump_json(indent=2)


class StepInfo(BaseModel):
    """What happened at one optimizer step, for on_step callbacks."""

    t: int
    kernel_tag: Optional[str] = Field(None, description="Tag of the proposal kernel, None at t=1")
    ess: float
    resampled: bool


class ReplicationResult(BaseModel):
    """Outcome of one seeded run."""

    index: int = Field(..., ge=0)
    seed: int
    success: bool
    error: Optional[str] = None
    failed_at: Optional[int] = Field(None, description="Step at which the run aborted")
    final_err_tilde: Optional[float] = None
    final_err_bar: Optional[float] = None
    trace_path: Optional[str] = None
    wall_clock: float = 0.0

    def __str__(self) -> str:
        return self.model_dump_json(indent=2)


class ExperimentSummary(BaseModel):
    """Aggregate outcome of run_experiment."""

    success: bool
    error: Optional[str] = None
    n_replications: int
    n_failed: int = 0
    seed: int
    wall_clock: float = 0.0
    output_dir: Optional[str] = None
    slopes: Dict[str, Optional[SlopeFit]] = Field(default_factory=dict)
    success_rates: Dict[str, float] = Field(default_factory=dict)
    results: List[ReplicationResult] = Field(default_factory=list)

    def __str__(self) -> str:
        return self.model_dump_json(indent=2)
