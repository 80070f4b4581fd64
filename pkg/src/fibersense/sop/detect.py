"""Polarization-beam-split detection with AC-coupled photodiodes.

px = P (1 + s1) / 2 + noise, py = P (1 - s1) / 2 + noise, each passed
through a first-order digital high-pass. The filter is the exact bilinear
transform of the analog RC high-pass with prewarped corner:

    K = tan(pi fc / fs);  b = [1, -1] / (1 + K);  a = [1, (K - 1) / (1 + K)]

so its response is reproducible bit for bit from the two constants.
"""

from dataclasses import dataclass

import numpy as np
from scipy import signal

from ..core.grids import TimeGrid
from ..core.rng import derive_rng
from ..errors import ValidationError
from .config import SopConfig
from .propagate import StateSeries

#: Samples per detection tile; fixed so noise draws are chunk-independent.
DETECT_TILE = 1 << 20


def highpass_coefficients(cfg: SopConfig):
    """(b, a) of the first-order high-pass at the configured corner."""
    k = np.tan(np.pi * cfg.highpass_corner_hz / cfg.sample_rate_hz)
    b = np.array([1.0, -1.0]) / (1.0 + k)
    a = np.array([1.0, (k - 1.0) / (1.0 + k)])
    return b, a


@dataclass
class SopTrace:
    """Dual-channel AC-coupled photodiode record at the SOP sample rate."""

    time: TimeGrid
    px: np.ndarray
    py: np.ndarray

    def __post_init__(self):
        if self.px.shape != (self.time.count,) or self.py.shape != (self.time.count,):
            raise ValidationError("trace channel length mismatch")


class Detector:
    """Streaming detection: upsample s1, add noise, high-pass, emit chunks.

    Chunks must be requested at DETECT_TILE boundaries so the per-tile
    noise streams (and hence the output) do not depend on chunk sizes.
    """

    def __init__(self, cfg: SopConfig, state: StateSeries, out_time: TimeGrid, seed=0):
        if abs((state.time.t0 - out_time.t0).total_seconds()) > 1e-9:
            raise ValidationError("state and output grids must share t0")
        if out_time.duration_s > state.time.duration_s + 1e-9:
            raise ValidationError("output grid extends past the state series")
        self.cfg = cfg
        self.out_time = out_time
        self.seed = seed
        self._t_state = state.time.offsets_s()
        self._s1 = np.asarray(state.s1, dtype=np.float64)
        self._ba = highpass_coefficients(cfg)
        zi0 = np.zeros(1)
        self._zx = zi0.copy()
        self._zy = zi0.copy()

    def tile(self, lo):
        """(px, py) float32 chunk for rows [lo, lo + DETECT_TILE)."""
        if lo % DETECT_TILE != 0:
            raise ValidationError("detector tiles must align to DETECT_TILE")
        hi = min(lo + DETECT_TILE, self.out_time.count)
        t = (lo + np.arange(hi - lo)) * self.out_time.dt_s
        s1 = np.interp(t, self._t_state, self._s1)
        p = self.cfg.total_power
        px = p * (1.0 + s1) / 2.0
        py = p * (1.0 - s1) / 2.0
        if self.cfg.detector_noise_std > 0:
            rng = derive_rng(self.seed, "sop", "detector", lo // DETECT_TILE)
            noise = rng.standard_normal((hi - lo, 2))
            px = px + noise[:, 0] * self.cfg.detector_noise_std
            py = py + noise[:, 1] * self.cfg.detector_noise_std
        b, a = self._ba
        px, self._zx = signal.lfilter(b, a, px, zi=self._zx)
        py, self._zy = signal.lfilter(b, a, py, zi=self._zy)
        return px.astype(np.float32), py.astype(np.float32)

    def tiles(self):
        for lo in range(0, self.out_time.count, DETECT_TILE):
            yield lo, self.tile(lo)


def detect(state: StateSeries, cfg: SopConfig, seed=0,
           out_time: "TimeGrid | None" = None) -> SopTrace:
    """In-memory detection of a full state series.

    Without an explicit output grid the trace covers the state series'
    duration at the configured SOP sample rate.
    """
    if out_time is None:
        count = int(np.floor(state.time.duration_s * cfg.sample_rate_hz)) + 1
        out_time = TimeGrid(state.time.t0, 1.0 / cfg.sample_rate_hz, count)
    det = Detector(cfg, state, out_time, seed)
    px = np.empty(out_time.count, dtype=np.float32)
    py = np.empty(out_time.count, dtype=np.float32)
    for lo, (cx, cy) in det.tiles():
        px[lo : lo + len(cx)] = cx
        py[lo : lo + len(cy)] = cy
    return SopTrace(out_time, px, py)
