"""Scenario domain model: cable segmentation, wind stations, strain field."""

from dataclasses import dataclass, field
from datetime import datetime

import numpy as np

from ..core.grids import PositionGrid, TimeGrid
from ..core.series import Series
from ..errors import ValidationError

SEGMENT_KINDS = ("onshore", "fjord", "transition", "offshore")


@dataclass(frozen=True)
class Oscillation:
    """Narrowband tone injected into one cable segment.

    ``window`` limits the tone to a time interval (UTC pair); None means
    always active.
    """

    freq_hz: float
    amplitude_ne: float
    window: "tuple[datetime, datetime] | None" = None

    def __post_init__(self):
        if self.freq_hz <= 0 or self.amplitude_ne < 0:
            raise ValidationError("oscillation needs freq_hz > 0 and amplitude_ne >= 0")


@dataclass(frozen=True)
class CableSegment:
    """One homogeneous stretch of cable.

    coupling: dynamic-strain std in nanostrain per (m/s) of wind above the
    calm threshold. static_gain: quasi-static strain offset in microstrain
    per (m/s) of peak wind above the threshold.
    """

    start_m: float
    end_m: float
    kind: str
    coupling: float = 0.0
    static_gain: float = 0.0
    oscillation: "Oscillation | None" = None

    def __post_init__(self):
        if self.kind not in SEGMENT_KINDS:
            raise ValidationError(f"segment kind {self.kind!r} not in {SEGMENT_KINDS}")
        if not self.end_m > self.start_m:
            raise ValidationError(f"segment [{self.start_m}, {self.end_m}] is empty")
        if not (np.isfinite(self.coupling) and self.coupling >= 0):
            raise ValidationError(f"coupling must be finite and >= 0, got {self.coupling}")
        if not np.isfinite(self.static_gain):
            raise ValidationError("static_gain must be finite")

    @property
    def length_m(self):
        return self.end_m - self.start_m


@dataclass(frozen=True)
class WindRecord:
    station_id: str
    time: datetime
    speed_mps: float

    def __post_init__(self):
        if not (np.isfinite(self.speed_mps) and self.speed_mps >= 0):
            raise ValidationError(
                f"wind speed must be finite and non-negative, got {self.speed_mps}"
            )


@dataclass
class Scenario:
    """Everything needed to synthesize the ground truth deterministically."""

    segments: "list[CableSegment]"
    wind: "dict[str, Series]"
    seed: int
    calm_threshold_mps: float = 3.0
    band_hz: "tuple[float, float]" = (0.05, 5.0)
    correlation_length_m: float = 500.0
    storm_window: "tuple[datetime, datetime] | None" = None
    das_phase_std_rad: float = 0.0
    botdr_single_shot_std: float = 0.0
    sop_detector_std: float = 0.0

    def __post_init__(self):
        if not self.segments:
            raise ValidationError("scenario needs at least one segment")
        segs = sorted(self.segments, key=lambda s: s.start_m)
        if abs(segs[0].start_m) > 1e-6:
            raise ValidationError("segments must start at 0 m")
        for a, b in zip(segs, segs[1:]):
            if abs(a.end_m - b.start_m) > 1e-6:
                raise ValidationError(
                    f"segments must tile the cable: gap/overlap at {a.end_m} m"
                )
        self.segments = segs
        if not self.length_m > 0:
            raise ValidationError("total cable length must be > 0")
        if not self.wind:
            raise ValidationError("scenario needs at least one wind station")
        if not self.band_hz[0] < self.band_hz[1]:
            raise ValidationError(f"bad forcing band {self.band_hz}")

    @property
    def length_m(self):
        return self.segments[-1].end_m

    def segment_at(self, x):
        """The unique segment containing position ``x``."""
        for seg in self.segments:
            if seg.start_m - 1e-9 <= x < seg.end_m:
                return seg
        if abs(x - self.length_m) < 1e-6:
            return self.segments[-1]
        raise ValidationError(f"position {x} m outside cable [0, {self.length_m}] m")

    def _profile(self, grid: PositionGrid, get):
        coords = grid.coords()
        if coords[0] < -1e-6 or coords[-1] > self.length_m + 1e-6:
            raise ValidationError(
                f"grid [{coords[0]}, {coords[-1]}] m exceeds cable length {self.length_m} m"
            )
        edges = np.array([s.end_m for s in self.segments])
        idx = np.minimum(np.searchsorted(edges, coords, side="right"),
                         len(self.segments) - 1)
        vals = np.array([get(s) for s in self.segments], dtype=np.float64)
        return vals[idx]

    def coupling_profile(self, grid: PositionGrid):
        """Per-position dynamic coupling, nanostrain per (m/s) exceedance."""
        return self._profile(grid, lambda s: s.coupling)

    def static_gain_profile(self, grid: PositionGrid):
        """Per-position static gain, microstrain per (m/s) exceedance."""
        return self._profile(grid, lambda s: s.static_gain)

    def tones(self, grid: PositionGrid):
        """List of (Oscillation, row_profile_ne) for segments with tones."""
        coords = grid.coords()
        out = []
        for seg in self.segments:
            if seg.oscillation is None:
                continue
            row = np.where((coords >= seg.start_m) & (coords < seg.end_m),
                           seg.oscillation.amplitude_ne, 0.0)
            out.append((seg.oscillation, row))
        return out

    def wind_span(self):
        """(start, end) of the interval covered by every station."""
        starts = [s.time.t0 for s in self.wind.values()]
        ends = [s.time.t_end for s in self.wind.values()]
        return max(starts), min(ends)

    def peak_wind_mps(self):
        """Maximum of the fused wind over the common station span.

        Evaluated on a dense grid (finest station cadence) so the value
        depends only on the scenario, not on any simulation grid.
        """
        from .wind import fuse_wind

        t0, t1 = self.wind_span()
        dt = min(s.time.dt_s for s in self.wind.values())
        count = max(int(round((t1 - t0).total_seconds() / dt)) + 1, 2)
        grid = TimeGrid(t0, dt, count)
        return float(fuse_wind(list(self.wind.values()), grid).values.max())


@dataclass
class StrainField:
    """Ground-truth strain on a position x time grid.

    ``dynamic`` holds the fast (wind-driven) strain in plain strain units;
    the static profiles are per-position snapshots at the two measurement
    epochs. ``temperature_delta`` is kelvin per position (zero by default).
    """

    position: PositionGrid
    time: TimeGrid
    dynamic: np.ndarray
    static_profile_before: np.ndarray
    static_profile_after: np.ndarray
    temperature_delta: np.ndarray = None

    def __post_init__(self):
        p = self.position.count
        if self.temperature_delta is None:
            self.temperature_delta = np.zeros(p)
        for name in ("static_profile_before", "static_profile_after", "temperature_delta"):
            v = np.asarray(getattr(self, name), dtype=np.float64)
            setattr(self, name, v)
            if v.shape != (p,):
                raise ValidationError(f"{name} length {v.shape} != position count {p}")
            if not np.all(np.isfinite(v)):
                raise ValidationError(f"{name} contains non-finite values")
        if self.dynamic.shape != (self.time.count, p):
            raise ValidationError(
                f"dynamic shape {self.dynamic.shape} != ({self.time.count}, {p})"
            )
