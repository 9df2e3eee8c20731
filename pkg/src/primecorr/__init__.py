"""Correlation length, gap statistics and spectra of the prime telegraph signal."""

__version__ = "0.1.0"

from .chaos import KYParams, KYSeries, iterate_ky, ky_spectrum
from .errors import (
    CoverageError,
    DegenerateOrbitError,
    DegenerateSignalError,
    InsufficientDataError,
    NoDecayError,
    NoPeakError,
    PrimeCorrError,
    RangeError,
    StationarityWarning,
    ValidationError,
)
from .estimators import (
    AcfCurve,
    ExpFit,
    GapHistogram,
    ResidualSeries,
    autocorrelation,
    detrend_log_density,
    fit_correlation_length,
    fit_exp_decay,
    fit_gap_scale,
    gap_histogram,
    poisson_check,
    synth_random_telegraph,
)
from .sieve import GapSeries, PrimeRange, Window, gaps_of, is_prime, mean_gap, sieve_range
from .spectral import (
    PowerSpectrum,
    dominant_peak,
    fit_spectral_decay,
    periodogram,
    welch_spectrum,
)
from .telegraph import TelegraphSignal, build_telegraph, stationarity_defect
