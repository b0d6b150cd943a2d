from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class KernelKind(str, Enum):
    """Proposal kernel families."""

    GPFSO = "gpfso"
    GPFSO_MIX = "gpfso_mix"
    KS_PFSO = "ks_pfso"
    JITTER = "jitter"


class MixVariant(str, Enum):
    """First mixture component used at breakpoints by GPFSO_MIX."""

    GAUSS = "gauss"
    DIRAC = "dirac"
    STUDENT = "student"


class ResamplingScheme(str, Enum):
    """Resampling algorithms."""

    SSP = "ssp"
    MULTINOMIAL = "multinomial"
    SYSTEMATIC = "systematic"


class ScheduleConfig(BaseModel):
    """Breakpoint recursion t_p = t_{p-1} + ceil(max(A t_{p-1}^rho log t_{p-1}, B))."""

    model_config = ConfigDict(frozen=True)

    a: float = Field(1.0, ge=0.0, description="Multiplier A of the growth term")
    b: float = Field(1.0, ge=1.0, description="Minimum gap B")
    t0: int = Field(5, ge=1, description="First breakpoint t_0")
    rho: Optional[float] = Field(
        None,
        gt=0.0,
        description="Growth exponent rho, in (0, min(alpha, 1)); unset derives it from alpha",
    )
    alpha: float = Field(0.5, gt=0.0, description="Learning-rate exponent, h_t = t^-alpha")

    @property
    def growth_rho(self) -> float:
        """The explicit rho, or 0.1 (alpha / 2 when alpha <= 0.1)."""
        if self.rho is not None:
            return self.rho
        return self.alpha / 2.0 if self.alpha <= 0.1 else 0.1

    @model_validator(mode="after")
    def check_rho(self):
        """rho must lie below both alpha and 1."""
        if self.growth_rho >= 1.0:
            raise ValueError("rho must be < 1")
        if self.growth_rho >= self.alpha:
            raise ValueError("rho must be < alpha")
        return self


class KernelConfig(BaseModel):
    """Kernel strategy and its strategy-specific parameters."""

    model_config = ConfigDict(frozen=True)

    kind: KernelKind = Field(KernelKind.GPFSO, description="Kernel family")
    mix_weight: float = Field(
        0.0, ge=0.0, lt=1.0, description="Weight w of the first mixture component (GPFSO_MIX)"
    )
    mix_variant: MixVariant = Field(
        MixVariant.GAUSS, description="First mixture component (GPFSO_MIX)"
    )
    mix_nu: Optional[float] = Field(
        None, gt=0.0, description="Degrees of freedom nu' of the STUDENT mixture component"
    )
    iota: float = Field(
        0.68, gt=0.0, lt=1.0, description="Shrinkage parameter of the KS_PFSO kernel"
    )


class GpfsoConfig(BaseModel):
    """All tunables of the optimizer loop."""

    model_config = ConfigDict(frozen=True)

    n_particles: int = Field(1000, ge=1, description="Number of particles N")
    c_ess: float = Field(0.7, gt=0.0, le=1.0, description="Resample when ESS <= N c_ess")
    nu: float = Field(50.0, gt=0.0, description="Student-t degrees of freedom at breakpoints")
    alpha: float = Field(0.5, gt=0.0, description="Learning-rate exponent, h_t = t^-alpha")
    c_sigma: float = Field(1.0, gt=0.0, description="Kernel scale, Sigma = c_sigma I_d")
    sigma_diag: Optional[List[float]] = Field(
        None, description="Optional diagonal of Sigma, overriding c_sigma"
    )
    schedule: Optional[ScheduleConfig] = Field(
        None, description="Breakpoint schedule; defaults use this config's alpha"
    )
    kernel: KernelConfig = Field(default_factory=KernelConfig)
    resampling: ResamplingScheme = Field(ResamplingScheme.SSP)
    burn_in: int = Field(0, ge=0, description="Averaging restart time (0 = none)")
    seed: int = Field(0, ge=0, lt=2**64, description="64-bit unsigned seed")

    @model_validator(mode="before")
    @classmethod
    def sync_schedule_alpha(cls, data):
        """Give the schedule this config's alpha unless one was set explicitly."""
        if isinstance(data, dict):
            alpha = float(data.get("alpha", 0.5))
            schedule = data.get("schedule")
            if schedule is None:
                schedule = {}
            if isinstance(schedule, dict):
                data = {**data, "schedule": {"alpha": alpha, **schedule}}
        return data

    @model_validator(mode="after")
    def check_consistency(self):
        """Cross-field invariants."""
        if self.schedule is not None and self.schedule.alpha != self.alpha:
            raise ValueError("schedule.alpha must equal alpha")
        if self.sigma_diag is not None and any(v <= 0 for v in self.sigma_diag):
            raise ValueError("sigma_diag entries must be positive")
        kernel = self.kernel
        if kernel.kind == KernelKind.GPFSO_MIX and kernel.mix_variant == MixVariant.STUDENT:
            if kernel.mix_nu is None:
                raise ValueError("mix_nu is required for the student mixture variant")
            if kernel.mix_nu >= self.nu:
                raise ValueError("mix_nu must lie in (0, nu)")
        return self
