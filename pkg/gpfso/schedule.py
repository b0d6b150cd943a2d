"""
Breakpoint schedule and learning rate.

Breakpoints (t_p) are the steps after which the jitter kernel switches to its
heavy-tailed form. They follow

    t_p = t_{p-1} + ceil(max(A * t_{p-1}^rho * log(t_{p-1}), B))

with the natural logarithm, and are memoised and extended on demand so a
streaming run never needs to know its horizon.
"""

import bisect
import math
import threading
from typing import Iterable, List, Optional

from .types.config import ScheduleConfig


def next_breakpoint(prev: int, config: ScheduleConfig) -> int:
    """
    Compute t_p from t_{p-1}.

    Args:
        prev (int): The previous breakpoint, >= 1.
        config (ScheduleConfig): Recursion constants.

    Returns:
        int: The next breakpoint.
    """
    if prev < 1:
        raise ValueError("prev must be >= 1")
    growth = config.a * prev**config.growth_rho * math.log(prev)
    return prev + math.ceil(max(growth, config.b))


class Schedule:
    """Memoised breakpoint set plus the learning rate h_t = t^-alpha."""

    def __init__(self, config: Optional[ScheduleConfig] = None):
        self.config = config or ScheduleConfig()
        self.alpha = self.config.alpha
        self._points: List[int] = [self.config.t0]
        self._explicit = False
        self._lock = threading.Lock()

    @classmethod
    def from_breakpoints(cls, points: Iterable[int], alpha: float = 0.5) -> "Schedule":
        """
        Schedule with an explicit, finite breakpoint list.

        Args:
            points (Iterable[int]): Breakpoints; sorted and de-duplicated.
            alpha (float): Learning-rate exponent.

        Returns:
            Schedule: A schedule that never extends past the given points.
        """
        sched = cls(ScheduleConfig(alpha=alpha))
        sched._points = sorted(set(int(p) for p in points))
        sched._explicit = True
        return sched

    def extend_to(self, horizon: int) -> None:
        """Generate breakpoints until the last one exceeds `horizon`."""
        if self._explicit or self._points[-1] > horizon:
            return
        with self._lock:
            points = list(self._points)
            while points[-1] <= horizon:
                points.append(next_breakpoint(points[-1], self.config))
            # Swap in one piece so readers always see a consistent prefix.
            self._points = points

    def is_breakpoint(self, t: int) -> bool:
        """True iff t is one of t_0, t_1, ..."""
        self.extend_to(t)
        points = self._points
        i = bisect.bisect_left(points, t)
        return i < len(points) and points[i] == t

    def breakpoints_up_to(self, horizon: int) -> List[int]:
        self.extend_to(horizon)
        points = self._points
        return points[: bisect.bisect_right(points, horizon)]

    def count_up_to(self, horizon: int) -> int:
        return len(self.breakpoints_up_to(horizon))

    def learning_rate(self, t: int) -> float:
        """h_t = t^-alpha; h_0 = 0 (the first update uses the prior draw as is)."""
        if t < 0:
            raise ValueError("t must be >= 0")
        if t == 0:
            return 0.0
        return float(t) ** (-self.alpha)
