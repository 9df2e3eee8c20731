"""
Analysis-level compositions of the sieve, telegraph, estimator and spectral
steps, plus the per-window Poissonian report.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

from . import estimators as est
from . import spectral as spec
from .errors import PrimeCorrError
from .sieve import GapSeries, Window, gaps_of, sieve_window
from .telegraph import TelegraphSignal, build_telegraph, stationarity_defect

#: ``|2 zeta / theta - 1|`` at or below this is reported as Poissonian.
POISSON_TOLERANCE = 0.1


@dataclass(frozen=True)
class WindowData:
    window: Window
    signal: TelegraphSignal
    gaps: GapSeries


def window_data(window: Window) -> WindowData:
    primes = sieve_window(window)
    return WindowData(window, build_telegraph(window, primes), gaps_of(primes))


def correlation_length(
    signal: TelegraphSignal,
    max_lag: int = est.MAX_LAG,
    threshold: float = est.ACF_FIT_THRESHOLD,
) -> Tuple[est.AcfCurve, est.ExpFit]:
    curve = est.autocorrelation(signal, max_lag)
    return curve, est.fit_correlation_length(curve, threshold)


def gap_scale(
    gaps: GapSeries,
    bin_width: int = est.GAP_BIN_WIDTH,
    min_count: int = est.GAP_MIN_COUNT,
) -> Tuple[est.GapHistogram, est.ExpFit]:
    hist = est.gap_histogram(gaps, bin_width)
    return hist, est.fit_gap_scale(hist, min_count)


@dataclass(frozen=True)
class GapSpectrumResult:
    histogram: est.GapHistogram
    trend: est.ExpFit
    residuals: est.ResidualSeries
    spectrum: spec.PowerSpectrum
    peak_frequency: float
    peak_power: float

    @property
    def peak_period(self) -> float:
        return 1.0 / self.peak_frequency


def gap_oscillation_spectrum(
    gaps: GapSeries,
    bin_width: int = est.GAP_BIN_WIDTH,
    min_count: int = est.GAP_MIN_COUNT,
) -> GapSpectrumResult:
    """Detrend the log gap density by its exponential fit and locate the spectral peak."""
    hist, trend = gap_scale(gaps, bin_width, min_count)
    resid = est.detrend_log_density(hist, trend)
    spectrum = spec.periodogram(resid.residuals, sample_spacing=resid.spacing)
    f, p = spec.dominant_peak(spectrum, exclude_dc=True)
    return GapSpectrumResult(hist, trend, resid, spectrum, f, p)


def signal_spectrum(
    signal: TelegraphSignal,
    segment_len: int = spec.SEGMENT_LEN,
    overlap: float = spec.OVERLAP,
    floor: float = spec.DECAY_FLOOR,
) -> Tuple[spec.PowerSpectrum, est.ExpFit]:
    spectrum = spec.welch_spectrum(signal.as_float(), segment_len, overlap)
    return spectrum, spec.fit_spectral_decay(spectrum, floor)


@dataclass(frozen=True)
class SyntheticSpec:
    """A random telegraph stand-in for a prime window, used as the Poissonian control."""

    theta: float
    length: int = 10**6
    seed: int = 0

    @property
    def label(self) -> str:
        return f"synthetic:{self.theta:g}:{self.length}:{self.seed}"


@dataclass
class WindowRecord:
    label: str
    n0: Optional[int]
    width: Optional[int]
    zeta: Optional[est.ExpFit] = None
    theta: Optional[est.ExpFit] = None
    ratio: Optional[float] = None
    zeta_per_log_n0: Optional[float] = None
    stationarity_defect: Optional[float] = None
    verdict: Optional[str] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "n0": self.n0,
            "width": self.width,
            "zeta": self.zeta.to_dict() if self.zeta else None,
            "theta": self.theta.to_dict() if self.theta else None,
            "ratio": self.ratio,
            "zeta_per_log_n0": self.zeta_per_log_n0,
            "stationarity_defect": self.stationarity_defect,
            "verdict": self.verdict,
            "error": self.error,
        }


@dataclass
class ReportBundle:
    records: List[WindowRecord] = field(default_factory=list)
    tolerance: float = POISSON_TOLERANCE

    @property
    def failed(self) -> List[WindowRecord]:
        return [r for r in self.records if not r.ok]


def verdict(ratio: float, tolerance: float = POISSON_TOLERANCE) -> str:
    return "poissonian" if abs(ratio - 1.0) <= tolerance else "anomalous"


def _record(
    target: Union[Window, SyntheticSpec],
    max_lag: int,
    acf_threshold: float,
    bin_width: int,
    min_count: int,
    tolerance: float,
) -> WindowRecord:
    if isinstance(target, SyntheticSpec):
        rec = WindowRecord(target.label, None, None)
    else:
        rec = WindowRecord(f"{target.center}:{target.width}", target.center, target.width)
    try:
        if isinstance(target, SyntheticSpec):
            signal = est.synth_random_telegraph(target.theta, target.length, target.seed)
            gaps = est.signal_gaps(signal)
            bw = 1  # synthetic gaps take odd values too
        else:
            data = window_data(target)
            signal, gaps, bw = data.signal, data.gaps, bin_width
            rec.stationarity_defect = stationarity_defect(target.center, target.width)
        _, rec.zeta = correlation_length(signal, max_lag, acf_threshold)
        _, rec.theta = gap_scale(gaps, bw, min_count)
        rec.ratio = est.poisson_check(rec.zeta, rec.theta)
        rec.verdict = verdict(rec.ratio, tolerance)
        if rec.n0 is not None:
            rec.zeta_per_log_n0 = rec.zeta.decay_scale / math.log(rec.n0)
    except (PrimeCorrError, ValueError) as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
    return rec


def poisson_report(
    targets: Sequence[Union[Window, SyntheticSpec]],
    max_lag: int = est.MAX_LAG,
    acf_threshold: float = est.ACF_FIT_THRESHOLD,
    bin_width: int = est.GAP_BIN_WIDTH,
    min_count: int = est.GAP_MIN_COUNT,
    tolerance: float = POISSON_TOLERANCE,
    jobs: int = 1,
) -> ReportBundle:
    """zeta, theta and ``2 zeta / theta`` per target; records keep input order."""

    def run(t):
        return _record(t, max_lag, acf_threshold, bin_width, min_count, tolerance)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(run, targets))
    else:
        records = [run(t) for t in targets]
    return ReportBundle(records, tolerance)


STUDY_WINDOWS = (
    Window(100_000, 10_000),
    Window(10_000_000, 100_000),
    Window(18_000, 4_000),
)
