"""Narrowband tone detection and localization."""

from dataclasses import dataclass

import numpy as np

from .._kernels import BandPower
from ..core.grids import format_utc
from ..core.series import PositionSeries, Waterfall
from ..das.config import DasConfig
from ..das.process import UnwrapScan
from ..errors import ValidationError

DEFAULT_PROMINENCE_DB = 6.0


@dataclass(frozen=True)
class ToneDetection:
    """One narrowband component found in a spectrogram."""

    freq_hz: float
    t_start: object
    t_end: object
    prominence_db: float
    position_m: "float | None" = None

    def to_dict(self):
        return {
            "freq_hz": self.freq_hz,
            "window": [format_utc(self.t_start), format_utc(self.t_end)],
            "prominence_db": self.prominence_db,
            "position_m": self.position_m,
        }


def find_tones(spec: Waterfall, band_hz, prominence_db=DEFAULT_PROMINENCE_DB,
               position_m=None):
    """Local maxima of the time-averaged PSD inside a band.

    Power is averaged over frames in the linear domain, and a bin counts as
    a tone when it is a local maximum at least ``prominence_db`` above the
    band's median floor. Prominence is relative, so global spectrogram gain
    changes do not affect the result. Returns a (possibly empty) list.
    """
    freqs = spec.axis.coords()
    lo, hi = band_hz
    if lo < freqs[0] - 1e-9 or hi > freqs[-1] + 1e-9:
        raise ValidationError(
            f"band [{lo}, {hi}] Hz outside spectrogram range "
            f"[{freqs[0]}, {freqs[-1]}] Hz"
        )
    linear = 10.0 ** (np.asarray(spec.values, dtype=np.float64) / 10.0)
    avg_db = 10.0 * np.log10(np.maximum(linear.mean(axis=0), 1e-30))
    idx = np.nonzero((freqs >= lo) & (freqs <= hi))[0]
    floor = np.median(avg_db[idx])

    out = []
    for i in idx:
        if 0 < i < len(freqs) - 1 and avg_db[i] >= avg_db[i - 1] and avg_db[i] > avg_db[i + 1]:
            prom = avg_db[i] - floor
            if prom >= prominence_db:
                out.append(ToneDetection(float(freqs[i]), spec.time.t0,
                                         spec.time.t_end, float(prom), position_m))
    return out


def localize_tone(record: Waterfall, cfg: DasConfig, freq_hz,
                  t_start_s=None, t_stop_s=None) -> PositionSeries:
    """Per-position narrowband power of a phase record (Goertzel-style).

    The record is unwrapped and converted to nanostrain; the returned
    values are the mean-square tone amplitude per position over the
    analysis window (optionally a [t_start_s, t_stop_s] slice relative to
    the record start). Phase offsets land in the DC bin and do not leak
    into tones of interest.
    """
    fs = record.time.fs_hz
    if freq_hz >= fs / 2:
        raise ValidationError(f"tone {freq_hz} Hz is above Nyquist ({fs / 2} Hz)")
    i0 = 0 if t_start_s is None else record.time.seconds_to_index(t_start_s, clip=True)
    i1 = record.time.count - 1 if t_stop_s is None else record.time.seconds_to_index(
        t_stop_s, clip=True)
    if i1 <= i0:
        raise ValidationError("empty localization window")

    n_pos = record.axis.count
    scan = UnwrapScan(n_pos)
    bp = BandPower(2.0 * np.pi * freq_hz / fs, n_pos)
    k_ne = cfg.strain_per_radian * 1e9
    for lo in range(i0, i1 + 1, 65536):
        hi = min(lo + 65536, i1 + 1)
        chunk = scan.update(np.asarray(record.values[lo:hi]))
        bp.update(np.ascontiguousarray(chunk * np.float32(k_ne)))
    n = i1 + 1 - i0
    power = bp.power() * (2.0 / (n * n))
    return PositionSeries(record.axis, power, "power")
