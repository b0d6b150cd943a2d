from .core import CallableModel, ModelSpec, ParticleSystem, RngStream
from .errors import (
    AllWeightsZero,
    ConfigError,
    CovarianceNotPSD,
    GpfsoError,
    InsufficientPoints,
    NonFiniteGradient,
)
from .types import (
    ExperimentConfig,
    ExperimentSummary,
    GpfsoConfig,
    KernelConfig,
    KernelKind,
    MixVariant,
    ResamplingScheme,
    ScheduleConfig,
    SlopeFit,
    StepInfo,
    Trace,
)
from .schedule import Schedule
from .resampling import ess, maybe_resample, multinomial_resample, ssp_resample
from .optimizer import Gpfso, OptimizerState, run
from .adagrad import AdagradState, adagrad_run
from .bench import fit_slope, run_experiment, success_rate

__all__ = [
    "CallableModel",
    "ModelSpec",
    "ParticleSystem",
    "RngStream",
    "AllWeightsZero",
    "ConfigError",
    "CovarianceNotPSD",
    "GpfsoError",
    "InsufficientPoints",
    "NonFiniteGradient",
    "ExperimentConfig",
    "ExperimentSummary",
    "GpfsoConfig",
    "KernelConfig",
    "KernelKind",
    "MixVariant",
    "ResamplingScheme",
    "ScheduleConfig",
    "SlopeFit",
    "StepInfo",
    "Trace",
    "Schedule",
    "ess",
    "maybe_resample",
    "multinomial_resample",
    "ssp_resample",
    "Gpfso",
    "OptimizerState",
    "run",
    "AdagradState",
    "adagrad_run",
    "fit_slope",
    "run_experiment",
    "success_rate",
]
