"""STFT spectrogram: analytic oracles and invariants."""

import numpy as np
import pytest

from fibersense.core import (
    DB_FLOOR,
    Series,
    TimeGrid,
    seeded_rng,
    stft_spectrogram,
)
from fibersense.errors import ValidationError

from conftest import T0


def make_series(values, fs=600.0):
    return Series(TimeGrid(T0, 1.0 / fs, len(values)), values)


def dirichlet(theta, n):
    """Sum_{k=0}^{n-1} e^{i theta k} in closed form."""
    theta = np.asarray(theta, dtype=np.float64)
    num = np.sin(n * theta / 2.0)
    den = np.sin(theta / 2.0)
    mag = np.where(np.abs(den) < 1e-15, float(n), num / np.where(den == 0, 1, den))
    return mag * np.exp(1j * theta * (n - 1) / 2.0)


def hann_sine_dft_power(f0, fs, n):
    """Closed-form |DFT|^2 of a periodic-Hann-windowed sine, all bins.

    Hann = 0.5 - 0.25 e^{+i 2 pi n/N} - 0.25 e^{-i 2 pi n/N}; the sine adds
    two Dirichlet lines at +/- omega0. Independent of any FFT routine.
    """
    w0 = 2.0 * np.pi * f0 / fs
    k = np.arange(n // 2 + 1)
    wk = 2.0 * np.pi * k / n
    coeffs = [(0.5, 0.0), (-0.25, 2.0 * np.pi / n), (-0.25, -2.0 * np.pi / n)]
    x = np.zeros(len(k), dtype=complex)
    for c, shift in coeffs:
        x += c / 2j * dirichlet(w0 + shift - wk, n)
        x -= c / 2j * dirichlet(-w0 + shift - wk, n)
    return np.abs(x) ** 2


def test_sine_peak_bin_matches_closed_form():
    fs, f0, n = 600.0, 2.25, 4096
    t = np.arange(n) / fs
    spec = stft_spectrogram(make_series(np.sin(2 * np.pi * f0 * t), fs), n, 0.0)
    got_bin = int(np.argmax(spec.values[0]))
    expected_bin = int(np.argmax(hann_sine_dft_power(f0, fs, n)))
    assert got_bin == expected_bin
    bin_hz = fs / n
    assert abs(spec.axis.index_to_coord(got_bin) - f0) <= bin_hz


def test_zero_series_all_floor():
    spec = stft_spectrogram(make_series(np.zeros(1024)), 256, 0.5)
    assert np.all(spec.values == DB_FLOOR)


def test_rect_window_orthogonal_bin():
    fs, n = 600.0, 64
    f0 = fs / 4.0
    t = np.arange(4 * n) / fs
    spec = stft_spectrogram(make_series(np.sin(2 * np.pi * f0 * t), fs), n, 0.0,
                            window="rect")
    peak = spec.axis.coord_to_index(f0)
    assert np.all(spec.values[:, peak] == 0.0)  # dB relative to max
    others = np.delete(spec.values, peak, axis=1)
    assert np.all(others == DB_FLOOR)  # exact orthogonality clamps to floor


def test_frequency_axis_spans_nyquist():
    spec = stft_spectrogram(make_series(np.ones(512)), 128, 0.5)
    assert spec.axis.start_hz == 0.0
    assert spec.axis.end_hz == pytest.approx(300.0)
    assert spec.axis.step_hz == pytest.approx(600.0 / 128)


def test_short_series_rejected():
    with pytest.raises(ValidationError):
        stft_spectrogram(make_series(np.zeros(100)), 128, 0.5)
    with pytest.raises(ValidationError):
        stft_spectrogram(make_series(np.zeros(100)), 50, 1.0)


def test_time_shift_invariance_up_to_one_frame():
    fs, n = 600.0, 256
    rng = seeded_rng(11)
    base = rng.standard_normal(4096)
    hop = n // 2
    a = stft_spectrogram(make_series(base, fs), n, 0.5)
    b = stft_spectrogram(make_series(np.roll(base, hop), fs), n, 0.5)
    # shifting by one hop shifts frames by one
    assert np.allclose(a.values[: a.values.shape[0] - 1], b.values[1:], atol=1e-6)
