"""
Exceptions raised by the gpfso library.
"""

from typing import Optional


class GpfsoError(Exception):
    """Base class for every error raised by gpfso."""

    pass


class AllWeightsZero(GpfsoError):
    """Every particle carries zero weight (total degeneracy)."""

    def __init__(self, message: str = "all particle weights are zero", t: Optional[int] = None):
        self.t = t
        if t is not None:
            message = f"{message} (t={t})"
        super().__init__(message)

    def at_step(self, t: int) -> "AllWeightsZero":
        """Return a copy of this error with the failing step attached."""
        base = str(self).split(" (t=")[0]
        return AllWeightsZero(base, t=t)


class CovarianceNotPSD(GpfsoError):
    """The particle covariance could not be factorised."""

    pass


class NonFiniteGradient(GpfsoError):
    """A gradient evaluation returned NaN or an infinite value."""

    def __init__(self, message: str, t: Optional[int] = None):
        self.t = t
        super().__init__(message if t is None else f"{message} (t={t})")


class InsufficientPoints(GpfsoError):
    """Too few usable rows to fit a convergence slope."""

    pass


class ConfigError(GpfsoError, ValueError):
    """A configuration file or override could not be turned into a valid config."""

    pass
