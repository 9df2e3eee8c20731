"""
Autocovariance, gap densities, semilog exponential fits and the Poissonian
cross-check ``2 * zeta / theta``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import DegenerateSignalError, InsufficientDataError, NoDecayError
from .sieve import GapSeries
from .telegraph import TelegraphSignal

#: Default largest lag of :func:`autocorrelation`.
MAX_LAG = 50
#: Fit the ACF from lag 0 up to the last lag before it first drops below this.
ACF_FIT_THRESHOLD = 0.4
#: Gap-density fits use bins holding at least this many gaps.
GAP_MIN_COUNT = 5
#: Default gap histogram bin width; every gap above the prime 2 is even.
GAP_BIN_WIDTH = 2


@dataclass(frozen=True)
class AcfCurve:
    """Normalized autocovariance ``values[l] = C(l)`` with ``C(0) = 1``."""

    lags: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.lags)


@dataclass(frozen=True)
class GapHistogram:
    """Empirical gap density on bins ``[start, start + bin_width)``."""

    bin_width: int
    bin_centers: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    density: np.ndarray = field(repr=False)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def mode_center(self) -> float:
        return float(self.bin_centers[np.argmax(self.counts)])


@dataclass(frozen=True)
class ExpFit:
    """
    Result of a straight-line fit of ``ln(value)`` against the abscissa.

    ``value ~ exp(log_intercept - x / decay_scale)`` over ``[fit_lo, fit_hi]``.
    """

    decay_scale: float
    log_intercept: float
    fit_lo: float
    fit_hi: float
    r_squared: float
    n_points: int

    @property
    def slope(self) -> float:
        return -1.0 / self.decay_scale

    def predict_log(self, x):
        return self.log_intercept + self.slope * np.asarray(x, dtype=float)

    def to_dict(self) -> dict:
        return {k: (int(v) if k == "n_points" else float(v)) for k, v in asdict(self).items()}


@dataclass(frozen=True)
class ResidualSeries:
    """Log-density minus the fitted line, on a uniform grid of spacing ``spacing``."""

    abscissa: np.ndarray = field(repr=False)
    residuals: np.ndarray = field(repr=False)
    spacing: float

    def __len__(self) -> int:
        return len(self.residuals)


def autocorrelation(signal: Union[TelegraphSignal, np.ndarray], max_lag: int = MAX_LAG) -> AcfCurve:
    """
    Biased, mean-subtracted autocovariance normalized at lag 0.

    ``C(l) = sum_n (x_n - m)(x_{n+l} - m) / N``, divided by ``C(0)``, with ``m``
    the sample mean and ``N`` the full sample count at every lag.
    """
    x = signal.as_float() if isinstance(signal, TelegraphSignal) else np.asarray(signal, dtype=float)
    n = len(x)
    if n < 100:
        raise InsufficientDataError(f"autocorrelation needs at least 100 samples, got {n}")
    if max_lag < 1 or max_lag >= n / 4:
        raise InsufficientDataError(f"max_lag must be in [1, {n / 4}), got {max_lag}")
    d = x - x.mean()
    c0 = float(np.dot(d, d))
    if c0 <= 0.0:
        raise DegenerateSignalError("constant signal has no autocorrelation")
    values = np.empty(max_lag + 1)
    values[0] = 1.0
    for lag in range(1, max_lag + 1):
        values[lag] = np.dot(d[:-lag], d[lag:]) / c0
    return AcfCurve(np.arange(max_lag + 1), values)


def fit_exp_decay(abscissa, values, mask=None) -> ExpFit:
    """
    Ordinary least squares of ``ln(values)`` on ``abscissa``.

    ``mask`` selects the points to use; nonpositive values are always dropped.
    """
    x = np.asarray(abscissa, dtype=float)
    y = np.asarray(values, dtype=float)
    sel = y > 0
    if mask is not None:
        sel &= np.asarray(mask, dtype=bool)
    x, ly = x[sel], np.log(y[sel])
    if len(x) < 3:
        raise InsufficientDataError(f"exponential fit needs 3 positive points, got {len(x)}")
    xm = x.mean()
    sxx = np.sum((x - xm) ** 2)
    if sxx == 0:
        raise InsufficientDataError("exponential fit needs distinct abscissae")
    slope = np.sum((x - xm) * (ly - ly.mean())) / sxx
    if not slope < 0:
        raise NoDecayError(f"fitted log-slope {slope:.4g} is not negative")
    intercept = ly.mean() - slope * xm
    ss_tot = np.sum((ly - ly.mean()) ** 2)
    ss_res = np.sum((ly - intercept - slope * x) ** 2)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return ExpFit(
        decay_scale=float(-1.0 / slope),
        log_intercept=float(intercept),
        fit_lo=float(x.min()),
        fit_hi=float(x.max()),
        r_squared=float(min(1.0, max(0.0, r2))),
        n_points=int(len(x)),
    )


def acf_fit_mask(curve: AcfCurve, threshold: float = ACF_FIT_THRESHOLD) -> np.ndarray:
    """Lags ``0..k`` where ``k`` is the last lag before C first drops below ``threshold``."""
    stop = curve.values < threshold if threshold > 0 else curve.values <= 0
    below = np.flatnonzero(stop)
    end = below[0] if len(below) else len(curve.values)
    mask = np.zeros(len(curve.values), dtype=bool)
    mask[:end] = True
    return mask


def fit_correlation_length(curve: AcfCurve, threshold: float = ACF_FIT_THRESHOLD) -> ExpFit:
    """Correlation length ``zeta`` as the e-folding lag of the initial ACF decay."""
    return fit_exp_decay(curve.lags, curve.values, acf_fit_mask(curve, threshold))


def gap_histogram(series: Union[GapSeries, np.ndarray], bin_width: int = GAP_BIN_WIDTH) -> GapHistogram:
    """
    Normalized histogram of gaps on bins ``[k*w, (k+1)*w)``.

    Bins run contiguously from the first to the last occupied one and are
    labelled by their centres ``k*w + w/2``.
    """
    gaps = series.gaps if isinstance(series, GapSeries) else np.asarray(series)
    if len(gaps) == 0:
        raise InsufficientDataError("histogram of an empty gap series")
    if bin_width < 1:
        raise ValueError(f"bin_width must be >= 1, got {bin_width}")
    k = np.asarray(gaps, dtype=np.int64) // bin_width
    counts = np.bincount(k - k.min())
    centers = (np.arange(k.min(), k.max() + 1) * bin_width + bin_width / 2).astype(float)
    density = counts / (counts.sum() * bin_width)
    return GapHistogram(int(bin_width), centers, counts, density)


def gap_fit_mask(hist: GapHistogram, min_count: int = GAP_MIN_COUNT) -> np.ndarray:
    """Bins from the histogram mode upward that hold at least ``min_count`` gaps."""
    idx = np.arange(len(hist.counts))
    return (idx >= np.argmax(hist.counts)) & (hist.counts >= min_count)


def fit_gap_scale(hist: GapHistogram, min_count: int = GAP_MIN_COUNT) -> ExpFit:
    """Scale ``theta`` of the exponential gap law ``P(tau) = exp(-tau/theta) / theta``."""
    return fit_exp_decay(hist.bin_centers, hist.density, gap_fit_mask(hist, min_count))


def poisson_check(zeta: Union[ExpFit, float], theta: Union[ExpFit, float]) -> float:
    """``2 * zeta / theta``; 1 for a random telegraph signal."""
    z = zeta.decay_scale if isinstance(zeta, ExpFit) else float(zeta)
    t = theta.decay_scale if isinstance(theta, ExpFit) else float(theta)
    return 2.0 * z / t


def detrend_log_density(hist: GapHistogram, trend: ExpFit) -> ResidualSeries:
    """
    Residuals ``ln(density) - trend`` over the trend's fit range.

    The grid starts at ``trend.fit_lo`` and stops before the first empty bin or
    after ``trend.fit_hi``, whichever comes first, so the spacing stays uniform.
    """
    c = hist.bin_centers
    inside = np.flatnonzero((c >= trend.fit_lo - 1e-9) & (c <= trend.fit_hi + 1e-9))
    if len(inside) == 0 or hist.counts[inside[0]] < 1:
        raise InsufficientDataError("fit range does not overlap the occupied histogram bins")
    empty = np.flatnonzero(hist.counts[inside] < 1)
    if len(empty):
        inside = inside[: empty[0]]
    x = c[inside]
    residuals = np.log(hist.density[inside]) - trend.predict_log(x)
    return ResidualSeries(x, residuals, float(hist.bin_width))


def synth_random_telegraph(theta: float, length: int, rng_seed: int) -> TelegraphSignal:
    """
    Random telegraph signal with exponential sign-change gaps of mean ``theta``.

    Waiting times are rounded to the nearest integer and floored at 1.
    """
    if theta <= 0:
        raise ValueError(f"theta must be positive, got {theta}")
    if length < 1:
        raise ValueError(f"length must be positive, got {length}")
    rng = np.random.default_rng(rng_seed)
    positions = np.empty(0, dtype=np.int64)
    last = 0
    chunk = int(length / theta) + 64
    while last < length:
        waits = np.maximum(1, np.rint(rng.exponential(theta, size=chunk))).astype(np.int64)
        more = last + np.cumsum(waits)
        positions = np.concatenate([positions, more])
        last = int(more[-1])
    positions = positions[positions < length]
    flips = np.zeros(length, dtype=np.int64)
    flips[positions] = 1
    values = (1 - 2 * (np.cumsum(flips) & 1)).astype(np.int8)
    return TelegraphSignal(0, values)


def signal_gaps(signal: TelegraphSignal) -> GapSeries:
    """Distances between successive sign changes of ``signal``."""
    cp = signal.change_points()
    if len(cp) < 2:
        raise InsufficientDataError("signal has fewer than two sign changes")
    gaps = np.diff(cp)
    gaps.flags.writeable = False
    return GapSeries(gaps, signal.start, signal.start + len(signal))
