"""SOP trace processing: windowed normalized Stokes and spectrograms."""

from dataclasses import dataclass

import numpy as np
from scipy import signal

from ..core.grids import TimeGrid
from ..core.series import Series, Waterfall
from ..core.spectral import stft_spectrogram
from ..errors import ValidationError
from .config import SopConfig
from .detect import SopTrace


@dataclass
class StokesSummary:
    """Windowed S1/S0 with the raw window RMS levels and a validity mask."""

    series: Series          # s1_norm per window, dimensionless in [-1, 1]
    s0_rms: np.ndarray      # rms(px) + rms(py) per window
    valid: np.ndarray       # False where S0 sits below the noise floor


def stokes_rms(trace: SopTrace, window_s, noise_floor=0.0) -> StokesSummary:
    """Normalized S1 from the RMS of the AC-coupled channels.

    Per window: S1 = rms(px) - rms(py), S0 = rms(px) + rms(py), output
    S1/S0. Windows whose S0 falls below ``noise_floor`` are flagged invalid
    (their value is forced to 0 to keep the series finite).
    """
    fs = trace.time.fs_hz
    win = int(round(window_s * fs))
    if win < 10:
        raise ValidationError(f"window of {win} samples is below the 10-sample minimum")
    n_win = trace.time.count // win
    if n_win < 1:
        raise ValidationError("trace shorter than one window")

    s1 = np.empty(n_win)
    s0 = np.empty(n_win)
    for w in range(n_win):  # windows may be large; stay chunk-friendly
        lo = w * win
        px = np.asarray(trace.px[lo : lo + win], dtype=np.float64)
        py = np.asarray(trace.py[lo : lo + win], dtype=np.float64)
        rx = np.sqrt(np.mean(px * px))
        ry = np.sqrt(np.mean(py * py))
        s1[w] = rx - ry
        s0[w] = rx + ry

    valid = s0 > max(noise_floor, 0.0)
    norm = np.where(s0 > 0, s1 / np.where(s0 > 0, s0, 1.0), 0.0)
    norm = np.where(valid, norm, 0.0)
    grid = trace.time.decimate(win)
    grid = TimeGrid(grid.t0, grid.dt_s, n_win)
    return StokesSummary(Series(grid, norm, "dimensionless"), s0, valid)


def decimate_difference(trace: SopTrace, max_fs=200.0) -> Series:
    """px - py resampled below ``max_fs`` (polyphase FIR anti-aliasing)."""
    fs = trace.time.fs_hz
    q = int(np.ceil(fs / max_fs))
    x = np.asarray(trace.px, dtype=np.float64) - np.asarray(trace.py, dtype=np.float64)
    if q <= 1:
        return Series(trace.time, x, "dimensionless")
    y = signal.resample_poly(x, 1, q)
    grid = TimeGrid(trace.time.t0, trace.time.dt_s * q, len(y))
    return Series(grid, y, "dimensionless")


def sop_spectrogram(trace: SopTrace, window_len=4096, overlap=0.5,
                    max_fs=200.0) -> Waterfall:
    """Spectrogram of the channel difference after decimation.

    All signals of interest sit well below 10 Hz, so the trace is first
    brought under ``max_fs`` to give the STFT useful bin spacing.
    """
    return stft_spectrogram(decimate_difference(trace, max_fs), window_len, overlap)
