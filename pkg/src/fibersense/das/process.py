"""DAS inverse processing: unwrap, strain conversion, std waterfall,
spectrograms.

The std waterfall chain is unwrap -> per-position reference removal ->
strain conversion -> block std. The reference subtraction (each position's
whole-record mean) is what "relative phase change" means here: block
statistics must not depend on the arbitrary per-position phase offset, and
removing the record mean rather than differencing consecutive frames keeps
signal amplitudes (a sine of amplitude a reads back as std a/sqrt(2), not
as its derivative).
"""

import numpy as np

from .._kernels import BandPower, unwrap_tile
from ..core.grids import TimeGrid
from ..core.series import Series, Waterfall
from ..core.spectral import stft_spectrogram
from ..core.stats import BlockStdAccumulator
from ..errors import ValidationError
from .config import DasConfig


def phase_to_strain(delta_phi, cfg: DasConfig):
    """Differential phase (radians) -> strain over one gauge length."""
    return np.asarray(delta_phi, dtype=np.float64) * cfg.strain_per_radian


class UnwrapScan:
    """Chunked time-axis unwrap with carried state (first sample preserved)."""

    def __init__(self, n_pos):
        self.n_pos = n_pos
        self._prev_wrapped = None
        self._prev_unwrapped = None

    def update(self, chunk):
        chunk = np.ascontiguousarray(chunk, dtype=np.float32)
        if self._prev_wrapped is None:
            first = chunk[0].astype(np.float64)
            self._prev_wrapped = first.copy()
            self._prev_unwrapped = first.copy()
        return unwrap_tile(chunk, self._prev_wrapped, self._prev_unwrapped)


def unwrap_time(record: Waterfall) -> Waterfall:
    """Unwrap a phase waterfall along time.

    Successive differences of the output lie in (-pi, pi]; a jump of
    exactly +/-pi unwraps toward +pi (fixed tie-break for golden files).
    """
    scan = UnwrapScan(record.axis.count)
    out = scan.update(record.values)
    return Waterfall(record.time, record.axis, out, "radian", validate=False)


def std_waterfall(record: Waterfall, cfg: DasConfig, block_t: int,
                  block_x: int) -> Waterfall:
    """Downsampled strain std map in nanostrain (see module docstring)."""
    acc = BlockStdAccumulator(record.time.count, record.axis.count, block_t, block_x)
    scan = UnwrapScan(record.axis.count)
    for lo in range(0, record.time.count, 65536):
        chunk = np.asarray(record.values[lo : lo + 65536])
        acc.update(scan.update(chunk))
    std_ne = acc.finalize(demean=True) * (cfg.strain_per_radian * 1e9)
    return Waterfall(record.time.decimate(block_t), record.axis.decimate(block_x),
                     std_ne, "nstrain")


def strain_column(record: Waterfall, cfg: DasConfig, position_m) -> Series:
    """One position's unwrapped, reference-removed strain series (nanostrain)."""
    j = record.axis.coord_to_index(position_m)
    col = np.ascontiguousarray(record.values[:, j : j + 1], dtype=np.float32)
    u = UnwrapScan(1).update(col)[:, 0].astype(np.float64)
    u -= u.mean()
    return Series(record.time, u * (cfg.strain_per_radian * 1e9), "nstrain")


def das_spectrogram(record: Waterfall, cfg: DasConfig, position_m,
                    window_len=4096, overlap=0.5) -> Waterfall:
    """Spectrogram of the strain at the position nearest ``position_m``."""
    return stft_spectrogram(strain_column(record, cfg, position_m),
                            window_len, overlap)


class BandPowerMap:
    """Per-position single-bin power over consecutive analysis windows.

    Feeds a Goertzel-style accumulator per window; emits a [window,
    position] waterfall of narrowband power. Input chunks are unwrapped
    strain (offsets land in the DC bin, far from any tone of interest).
    """

    def __init__(self, freq_hz, time: TimeGrid, position, window_len):
        if freq_hz >= 0.5 / time.dt_s:
            raise ValidationError(f"tone {freq_hz} Hz above Nyquist")
        self.freq_hz = freq_hz
        self.time = time
        self.position = position
        self.n_pos = position.count
        self.window_len = int(window_len)
        self.n_windows = time.count // self.window_len
        self._omega = 2.0 * np.pi * freq_hz * time.dt_s
        self._rows = []
        self._bp = None
        self._fill = 0

    def update(self, chunk):
        chunk = np.asarray(chunk)
        lo = 0
        while lo < chunk.shape[0] and len(self._rows) < self.n_windows:
            if self._bp is None:
                self._bp = BandPower(self._omega, self.n_pos)
                self._fill = 0
            take = min(self.window_len - self._fill, chunk.shape[0] - lo)
            self._bp.update(np.ascontiguousarray(chunk[lo : lo + take], dtype=np.float32))
            self._fill += take
            lo += take
            if self._fill == self.window_len:
                # normalize |X|^2 to mean-square tone amplitude: (2/N)^2 / 2
                scale = 2.0 / (self.window_len**2)
                self._rows.append(self._bp.power() * scale)
                self._bp = None

    def waterfall(self) -> Waterfall:
        if len(self._rows) != self.n_windows:
            raise ValidationError("band power map is missing windows")
        return Waterfall(self.time.decimate(self.window_len), self.position,
                         np.stack(self._rows), "power")
