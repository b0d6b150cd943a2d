from .config import (
    GpfsoConfig,
    KernelConfig,
    KernelKind,
    MixVariant,
    ResamplingScheme,
    ScheduleConfig,
)
from .experiment import (
    Algorithm,
    ErrorNorm,
    ExperimentConfig,
    ExperimentSummary,
    ModelName,
    ReplicationResult,
    SlopeFit,
    StepInfo,
)
from .trace import RecordPlan, Trace, TraceRow, error_norms, make_row

__all__ = [
    "GpfsoConfig",
    "KernelConfig",
    "KernelKind",
    "MixVariant",
    "ResamplingScheme",
    "ScheduleConfig",
    "Algorithm",
    "ErrorNorm",
    "ExperimentConfig",
    "ExperimentSummary",
    "ModelName",
    "ReplicationResult",
    "SlopeFit",
    "StepInfo",
    "RecordPlan",
    "Trace",
    "TraceRow",
    "error_norms",
    "make_row",
]
