import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primecorr import (
    InsufficientDataError,
    NoDecayError,
    NoPeakError,
    PowerSpectrum,
    Window,
    dominant_peak,
    fit_spectral_decay,
    periodogram,
    welch_spectrum,
)
from primecorr.pipelines import gap_oscillation_spectrum, signal_spectrum, window_data


def cosine(period, spacing, n):
    tau = spacing * np.arange(n)
    return np.cos(2 * np.pi * tau / period)


def test_cosine_period_six():
    s = periodogram(cosine(6, 2, 48), sample_spacing=2)
    f, p = dominant_peak(s)
    assert f == pytest.approx(1 / 6)
    others = np.delete(s.power, np.argmax(s.power))
    assert np.all(others < 1e-20 * p + 1e-25)
    assert s.frequencies.max() <= s.nyquist == 0.25


def test_constant_series():
    s = periodogram(np.full(64, 3.7))
    assert np.all(s.power[1:] == 0)
    with pytest.raises(NoPeakError):
        dominant_peak(s)


def test_short_series():
    with pytest.raises(InsufficientDataError):
        periodogram(np.arange(7.0))
    with pytest.raises(InsufficientDataError):
        welch_spectrum(np.arange(100.0), segment_len=200)
    with pytest.raises(ValueError):
        welch_spectrum(np.arange(100.0), segment_len=32, overlap=0.95)


def test_white_coin_flips_flat():
    rng = np.random.default_rng(11)
    x = rng.choice([-1.0, 1.0], size=2**16)
    s = welch_spectrum(x, segment_len=256)
    interior = s.power[1:-1]
    # one-sided density of unit-variance white noise is 2
    assert interior.mean() == pytest.approx(2.0, rel=0.02)
    assert np.all(np.abs(interior / 2 - 1) < 0.35)
    p = periodogram(x)
    assert p.power[1:-1].mean() == pytest.approx(2.0, rel=0.03)


@settings(max_examples=40, deadline=None)
@given(st.integers(8, 3000), st.floats(0.1, 10), st.integers(0, 2**31))
def test_parseval(n, spacing, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n) * 3 + 1
    s = periodogram(x, spacing)
    assert np.sum(s.power) * s.df == pytest.approx(np.var(x), rel=1e-6)


def test_welch_peak_matches_periodogram():
    x = cosine(6, 2, 480) + 0.1 * np.random.default_rng(0).standard_normal(480)
    f0, _ = dominant_peak(periodogram(x, 2))
    for seg in (96, 120, 240):
        s = welch_spectrum(x, segment_len=seg, sample_spacing=2)
        f, _ = dominant_peak(s)
        assert abs(f - f0) <= s.df


def test_sign_invariance():
    sig = window_data(Window(18_000, 4_000)).signal
    a = welch_spectrum(sig.as_float()).power
    b = welch_spectrum(sig.negated().as_float()).power
    np.testing.assert_allclose(a, b, rtol=1e-12)


def test_decay_roundtrip():
    f = np.linspace(0, 0.5, 101)
    s = PowerSpectrum(f, np.exp(-f / 0.1), 1.0, True)
    fit = fit_spectral_decay(s, floor=1e-3)
    assert fit.decay_scale == pytest.approx(0.1, rel=1e-10)
    assert fit.r_squared == pytest.approx(1.0)
    assert fit.fit_lo == f[1]
    band = fit_spectral_decay(s, f_lo=0.1, f_hi=0.3)
    assert band.decay_scale == pytest.approx(0.1, rel=1e-10)
    assert (band.fit_lo, band.fit_hi) == (0.1, 0.3)


def test_decay_range_stops_at_floor():
    f = np.linspace(0, 0.5, 101)
    s = PowerSpectrum(f, np.exp(-f / 0.05), 1.0, True)
    fit = fit_spectral_decay(s, floor=0.01)
    # exp(-f/0.05) < 0.01 * exp(-0.005/0.05) once f > 0.005 + 0.05 ln 100
    assert fit.fit_hi <= 0.005 + 0.05 * np.log(100) + 1e-12


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_white_noise_has_no_decay(seed):
    x = np.random.default_rng(seed).standard_normal(2**14)
    s = welch_spectrum(x)
    try:
        fit = fit_spectral_decay(s)
    except (NoDecayError, InsufficientDataError):
        return
    assert fit.r_squared < 0.3


def test_gap_period_six_peak_large_window():
    res = gap_oscillation_spectrum(window_data(Window(10**5, 10**4)).gaps)
    assert abs(res.peak_frequency - 1 / 6) <= res.spectrum.df
    assert res.spectrum.nyquist == 0.25


def test_moderate_vspec_decay():
    spectrum, fit = signal_spectrum(window_data(Window(18_000, 4_000)).signal)
    assert fit.r_squared >= 0.9
    assert fit.n_points >= 5
