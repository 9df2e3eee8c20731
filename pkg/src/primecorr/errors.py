"""Exception hierarchy shared by every module."""


class PrimeCorrError(Exception):
    """Base class for all errors raised by primecorr."""


class RangeError(PrimeCorrError, ValueError):
    """Invalid integer bounds."""


class InsufficientDataError(PrimeCorrError, ValueError):
    """Too few samples, primes, bins or points for the requested operation."""


class CoverageError(PrimeCorrError, ValueError):
    """A prime range does not cover the window it is meant to describe."""


class DegenerateSignalError(PrimeCorrError, ValueError):
    """Zero-variance input where a normalized statistic is requested."""


class NoDecayError(PrimeCorrError, ValueError):
    """A log-linear fit produced a nonnegative slope."""


class NoPeakError(PrimeCorrError, ValueError):
    """A spectrum carries no power outside the excluded bins."""


class ValidationError(PrimeCorrError, ValueError):
    """Invalid model parameters."""


class DegenerateOrbitError(ValidationError):
    """A Kaplan-Yorke seed that sits on the fixed point of the doubling map."""


class StationarityWarning(UserWarning):
    """The drift of the mean gap across a window exceeds the configured threshold."""
