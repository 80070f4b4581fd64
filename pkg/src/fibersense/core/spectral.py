"""Short-time Fourier spectrograms."""

import numpy as np

from ..errors import ValidationError
from .grids import FrequencyGrid, TimeGrid
from .series import Series, Waterfall

#: Spectrogram floor: log of zero power clamps here so values stay finite.
DB_FLOOR = -200.0

_WINDOWS = ("hann", "rect")


def _window(kind, n):
    if kind == "hann":
        # periodic Hann, the STFT convention
        return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)
    if kind == "rect":
        return np.ones(n)
    raise ValidationError(f"unknown window {kind!r} (allowed: {_WINDOWS})")


def stft_spectrogram(s: Series, window_len: int, overlap: float = 0.5,
                     window: str = "hann") -> Waterfall:
    """Power spectrogram of a series, in dB relative to the maximum bin.

    Frames of ``window_len`` samples advance by ``window_len * (1-overlap)``
    samples; each is windowed, Fourier transformed, and squared. The whole
    map is normalised by its maximum power and clamped at ``DB_FLOOR``. The
    frequency axis spans [0, fs/2] with fs/window_len bin spacing; frame
    timestamps are window centers.

    Raises ``ValidationError`` if the series is shorter than one window or
    the overlap is outside [0, 1).
    """
    n = len(s)
    if window_len > n:
        raise ValidationError(
            f"series of {n} samples is shorter than one window ({window_len})"
        )
    if window_len < 2:
        raise ValidationError("window_len must be >= 2")
    if not 0.0 <= overlap < 1.0:
        raise ValidationError(f"overlap must be in [0, 1), got {overlap}")
    hop = max(int(round(window_len * (1.0 - overlap))), 1)
    win = _window(window, window_len)

    frames = np.lib.stride_tricks.sliding_window_view(
        np.asarray(s.values, dtype=np.float64), window_len
    )[::hop]
    power = np.abs(np.fft.rfft(frames * win, axis=1)) ** 2

    ref = power.max()
    if ref > 0.0:
        with np.errstate(divide="ignore"):
            db = 10.0 * np.log10(power / ref)
        db = np.maximum(db, DB_FLOOR)
    else:
        db = np.full(power.shape, DB_FLOOR)

    fs = s.time.fs_hz
    freq = FrequencyGrid(0.0, fs / window_len, window_len // 2 + 1)
    # frame instants: center of each window
    tgrid = TimeGrid(
        s.time.index_to_time((window_len - 1) / 2.0), hop * s.time.dt_s, len(frames)
    )
    return Waterfall(tgrid, freq, db, "dB")
