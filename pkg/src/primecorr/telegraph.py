"""
The prime telegraph signal v(n): a +/-1 sequence that flips sign at every prime.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import CoverageError, RangeError, StationarityWarning
from .sieve import PrimeRange, Window, sieve_window

#: Default warning level for :func:`check_stationarity`.
STATIONARITY_THRESHOLD = 0.05


@dataclass(frozen=True)
class TelegraphSignal:
    """
    A +/-1 sequence ``values[i] = v(start + i)``.

    ``window`` is ``None`` for synthetic signals that do not come from primes.
    The value array is read-only.
    """

    start: int
    values: np.ndarray = field(repr=False)
    window: Optional[Window] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.int8)
        if values.size and not np.all(np.abs(values) == 1):
            raise ValueError("telegraph values must be +1 or -1")
        if values.flags.writeable:
            values = values.copy()
            values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def n(self) -> np.ndarray:
        """Integer index of every sample."""
        return np.arange(self.start, self.start + len(self.values))

    def change_points(self) -> np.ndarray:
        """The ``n`` at which ``v(n) != v(n-1)``; these are the primes of the window."""
        return self.start + 1 + np.flatnonzero(np.diff(self.values))

    def flip_count(self) -> int:
        return int(np.count_nonzero(np.diff(self.values)))

    def negated(self) -> "TelegraphSignal":
        return TelegraphSignal(self.start, -self.values, self.window)

    def as_float(self) -> np.ndarray:
        return self.values.astype(np.float64)


def build_telegraph(window: Window, primes: PrimeRange) -> TelegraphSignal:
    """
    Build v(n) on ``[window.lo, window.hi)``.

    ``v(lo) = +1`` and v flips at each prime ``p`` with ``lo < p < hi``, the new
    sign taking effect at ``p`` itself, so ``v(n) = (-1)**(pi(n) - pi(lo))``.
    """
    if window.lo < 3:
        raise RangeError(f"v(n) is defined for n >= 3, window starts at {window.lo}")
    if not primes.covers(window.lo, window.hi):
        raise CoverageError(
            f"primes cover [{primes.lo}, {primes.hi}) but the window is [{window.lo}, {window.hi})"
        )
    p = primes.primes
    inside = p[(p > window.lo) & (p < window.hi)]
    flips = np.zeros(window.width, dtype=np.int64)
    flips[inside - window.lo] = 1
    parity = np.cumsum(flips) & 1
    values = (1 - 2 * parity).astype(np.int8)
    return TelegraphSignal(window.lo, values, window)


def telegraph_for_window(window: Window) -> TelegraphSignal:
    return build_telegraph(window, sieve_window(window))


def stationarity_defect(center: float, width: float) -> float:
    """Relative drift ``width / (center * ln center)`` of the mean gap across a window."""
    if center < 3:
        raise RangeError(f"center must be >= 3, got {center}")
    return width / (center * math.log(center))


def check_stationarity(window: Window, threshold: float = STATIONARITY_THRESHOLD) -> float:
    """Return the stationarity defect of ``window``, warning when it exceeds ``threshold``."""
    defect = stationarity_defect(window.center, window.width)
    if defect > threshold:
        warnings.warn(
            f"window (n0={window.center}, width={window.width}) has stationarity defect "
            f"{defect:.4f} > {threshold}",
            StationarityWarning,
            stacklevel=2,
        )
    return defect

