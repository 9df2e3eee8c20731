"""
Segmented sieve of Eratosthenes and prime-gap series over integer windows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientDataError, RangeError

#: Largest admissible upper bound for :func:`sieve_range`.
SIEVE_CEILING = 10**12

#: Default number of odd candidates held in memory per segment.
SEGMENT_SIZE = 2**16


@dataclass(frozen=True)
class Window:
    """A window of stationarity ``[lo, hi)`` of ``width`` integers centred at ``center``.

    ``lo = center - width // 2`` and ``hi = lo + width``, so odd widths put the
    extra integer on the right.
    """

    center: int
    width: int

    def __post_init__(self):
        if self.width < 2:
            raise RangeError(f"window width must be >= 2, got {self.width}")
        if self.width >= self.center:
            raise RangeError(
                f"window width {self.width} must be smaller than its center {self.center}"
            )

    @property
    def lo(self) -> int:
        return self.center - self.width // 2

    @property
    def hi(self) -> int:
        return self.lo + self.width

    @property
    def stationarity_defect(self) -> float:
        from .telegraph import stationarity_defect

        return stationarity_defect(self.center, self.width)

    def __contains__(self, n: int) -> bool:
        return self.lo <= n < self.hi


@dataclass(frozen=True)
class PrimeRange:
    """All primes in ``[lo, hi)``, ascending."""

    lo: int
    hi: int
    primes: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.primes)

    def covers(self, lo: int, hi: int) -> bool:
        return self.lo <= lo and hi <= self.hi

    def restrict(self, lo: int, hi: int) -> "PrimeRange":
        """Return the sub-range ``[lo, hi)``; it must lie inside this range."""
        if not self.covers(lo, hi):
            raise RangeError(f"[{lo}, {hi}) is not inside [{self.lo}, {self.hi})")
        i, j = np.searchsorted(self.primes, [lo, hi])
        return PrimeRange(lo, hi, self.primes[i:j])


@dataclass(frozen=True)
class GapSeries:
    """Consecutive differences ``p[i+1] - p[i]`` of the primes in ``[lo, hi)``."""

    gaps: np.ndarray = field(repr=False)
    lo: int
    hi: int

    def __len__(self) -> int:
        return len(self.gaps)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def small_primes(limit: int) -> np.ndarray:
    """Primes ``<= limit`` by a plain (unsegmented) sieve. Used to seed segments."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def _sieve_segment(seg_lo: int, seg_hi: int, base: np.ndarray) -> np.ndarray:
    # seg_lo is odd; entry i stands for seg_lo + 2*i
    n = (seg_hi - seg_lo + 1) // 2
    flags = np.ones(n, dtype=bool)
    for p in base:
        p = int(p)
        if p * p >= seg_hi:
            break
        first = max(p * p, -(-seg_lo // p) * p)
        if first % 2 == 0:
            first += p
        flags[(first - seg_lo) // 2 :: p] = False
    return seg_lo + 2 * np.flatnonzero(flags).astype(np.int64)


def sieve_range(lo: int, hi: int, segment_size: int = SEGMENT_SIZE) -> PrimeRange:
    """
    Return every prime in ``[lo, hi)``.

    Odd candidates are crossed off one segment at a time using the primes up
    to ``sqrt(hi)``, so memory scales with ``segment_size`` rather than ``hi``.

    >>> sieve_range(10, 30).primes.tolist()
    [11, 13, 17, 19, 23, 29]
    """
    lo, hi = int(lo), int(hi)
    if lo < 2:
        raise RangeError(f"lower bound must be >= 2, got {lo}")
    if lo >= hi:
        raise RangeError(f"empty range [{lo}, {hi})")
    if hi > SIEVE_CEILING:
        raise RangeError(f"upper bound {hi} exceeds the sieve ceiling {SIEVE_CEILING}")
    if segment_size < 1:
        raise RangeError("segment_size must be positive")

    base = small_primes(math.isqrt(hi - 1))[1:]  # odd primes only
    chunks = []
    if lo <= 2 < hi:
        chunks.append(np.array([2], dtype=np.int64))
    start = max(lo, 3) | 1
    span = 2 * segment_size
    for seg_lo in range(start, hi, span):
        chunks.append(_sieve_segment(seg_lo, min(seg_lo + span, hi), base))
    primes = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)
    return PrimeRange(lo, hi, _frozen(primes))


def sieve_window(window: Window, segment_size: int = SEGMENT_SIZE) -> PrimeRange:
    return sieve_range(window.lo, window.hi, segment_size)


def is_prime(n: int) -> bool:
    """Deterministic primality by sieving the single-point range ``[n, n+1)``."""
    n = int(n)
    if n < 2:
        return False
    return len(sieve_range(n, n + 1)) == 1


def gaps_of(primes: PrimeRange) -> GapSeries:
    """Differences between consecutive primes of ``primes``."""
    if len(primes) < 2:
        raise InsufficientDataError(
            f"need at least 2 primes to form a gap, range [{primes.lo}, {primes.hi}) has {len(primes)}"
        )
    return GapSeries(_frozen(np.diff(primes.primes)), primes.lo, primes.hi)


def mean_gap(series: GapSeries) -> float:
    """Arithmetic mean gap; close to ``ln(n0)`` for a window centred at ``n0``."""
    if len(series) == 0:
        raise InsufficientDataError("mean of an empty gap series")
    return float(np.mean(series.gaps))
