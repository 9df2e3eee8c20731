"""
Power spectra: plain periodogram, Welch averages, peak picking and the
semilog spectral-decay fit.

Frequencies are in cycles per abscissa unit. Power is a one-sided density,
so ``sum(power) * df`` equals the variance of the (mean-removed) series.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy import signal as _signal

from .errors import InsufficientDataError, NoPeakError
from .estimators import ExpFit, fit_exp_decay

#: Welch defaults shared by the v(n) and Kaplan-Yorke spectra.
SEGMENT_LEN = 256
OVERLAP = 0.5
#: The decay range ends before the first bin below this fraction of the peak.
DECAY_FLOOR = 0.05


@dataclass(frozen=True)
class PowerSpectrum:
    """One-sided power spectral density; ``frequencies[0] == 0`` when ``has_dc``."""

    frequencies: np.ndarray = field(repr=False)
    power: np.ndarray = field(repr=False)
    sample_spacing: float = 1.0
    has_dc: bool = True

    def __len__(self) -> int:
        return len(self.frequencies)

    @property
    def nyquist(self) -> float:
        return 0.5 / self.sample_spacing

    @property
    def df(self) -> float:
        return float(self.frequencies[1] - self.frequencies[0])

    def without_dc(self) -> "PowerSpectrum":
        if not self.has_dc:
            return self
        return PowerSpectrum(self.frequencies[1:], self.power[1:], self.sample_spacing, False)


def _series(series, min_len: int = 8) -> np.ndarray:
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or len(x) < min_len:
        raise InsufficientDataError(f"spectrum needs at least {min_len} samples, got {x.size}")
    return x


def periodogram(series, sample_spacing: float = 1.0) -> PowerSpectrum:
    """Squared DFT magnitude at ``k / (N * spacing)``, ``k = 0..N//2``, after mean removal."""
    x = _series(series)
    f, p = _signal.periodogram(
        x, fs=1.0 / sample_spacing, window="boxcar", detrend="constant", scaling="density"
    )
    return PowerSpectrum(f, p, float(sample_spacing), True)


def welch_spectrum(
    series,
    segment_len: int = SEGMENT_LEN,
    overlap: float = OVERLAP,
    sample_spacing: float = 1.0,
) -> PowerSpectrum:
    """Average of Hann-tapered segment periodograms."""
    x = _series(series)
    if not 8 <= segment_len <= len(x):
        raise InsufficientDataError(
            f"segment_len must be in [8, {len(x)}], got {segment_len}"
        )
    if not 0.0 <= overlap <= 0.9:
        raise ValueError(f"overlap must be in [0, 0.9], got {overlap}")
    f, p = _signal.welch(
        x,
        fs=1.0 / sample_spacing,
        window="hann",
        nperseg=segment_len,
        noverlap=int(overlap * segment_len),
        detrend="constant",
        scaling="density",
    )
    return PowerSpectrum(f, p, float(sample_spacing), True)


def dominant_peak(spectrum: PowerSpectrum, exclude_dc: bool = True) -> Tuple[float, float]:
    """``(frequency, power)`` of the strongest bin."""
    s = spectrum.without_dc() if exclude_dc else spectrum
    if len(s) == 0 or not np.any(s.power > 0):
        raise NoPeakError("spectrum has no power to peak on")
    k = int(np.argmax(s.power))
    return float(s.frequencies[k]), float(s.power[k])


def decay_range(spectrum: PowerSpectrum, floor: float = DECAY_FLOOR) -> np.ndarray:
    """Mask from the non-DC peak to the last bin before power first falls below ``floor * peak``."""
    s = spectrum
    start = 1 if s.has_dc else 0
    k0 = start + int(np.argmax(s.power[start:]))
    peak = s.power[k0]
    below = np.flatnonzero(s.power[k0:] < floor * peak)
    end = k0 + below[0] if len(below) else len(s.power)
    mask = np.zeros(len(s.power), dtype=bool)
    mask[k0:end] = True
    return mask


def fit_spectral_decay(
    spectrum: PowerSpectrum,
    floor: float = DECAY_FLOOR,
    f_lo: Optional[float] = None,
    f_hi: Optional[float] = None,
) -> ExpFit:
    """
    Semilog fit ``power ~ exp(-f / f_e)``; ``decay_scale`` is the e-folding frequency ``f_e``.

    With ``f_lo`` and ``f_hi`` the fit uses that frequency band instead of
    :func:`decay_range`.
    """
    if f_lo is not None or f_hi is not None:
        lo = -np.inf if f_lo is None else f_lo
        hi = np.inf if f_hi is None else f_hi
        mask = (spectrum.frequencies >= lo) & (spectrum.frequencies <= hi)
        if spectrum.has_dc:
            mask[0] = False
    else:
        mask = decay_range(spectrum, floor)
    if np.count_nonzero(mask & (spectrum.power > 0)) < 5:
        raise InsufficientDataError("spectral decay fit needs at least 5 positive bins")
    return fit_exp_decay(spectrum.frequencies, spectrum.power, mask)
