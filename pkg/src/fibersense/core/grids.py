"""Uniform sample grids for the position, time and frequency axes.

All data containers in the package hang off these three grid types; they
own the index <-> coordinate arithmetic so that it round-trips exactly.
"""

from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

import numpy as np

from ..errors import ValidationError


def parse_utc(text):
    """Parse an ISO-8601 timestamp; naive values are taken as UTC."""
    try:
        dt = datetime.fromisoformat(str(text).replace("Z", "+00:00"))
    except ValueError as exc:
        raise ValidationError(f"bad timestamp {text!r}: {exc}") from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_utc(dt):
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


@dataclass(frozen=True)
class PositionGrid:
    """Uniform positions along the cable, in meters."""

    start_m: float
    spacing_m: float
    count: int

    def __post_init__(self):
        if not self.spacing_m > 0:
            raise ValidationError(f"spacing_m must be > 0, got {self.spacing_m}")
        if self.count < 1:
            raise ValidationError(f"count must be >= 1, got {self.count}")

    @property
    def end_m(self):
        return self.start_m + self.spacing_m * (self.count - 1)

    @property
    def length_m(self):
        """Covered length: spacing * (count - 1)."""
        return self.spacing_m * (self.count - 1)

    def coords(self):
        return self.start_m + self.spacing_m * np.arange(self.count)

    def index_to_coord(self, i):
        return self.start_m + self.spacing_m * i

    def coord_to_index(self, x):
        """Nearest index; raises if ``x`` lies outside the grid by more than
        half a spacing."""
        i = int(round((x - self.start_m) / self.spacing_m))
        if i < 0 or i >= self.count or abs(self.index_to_coord(i) - x) > self.spacing_m / 2 + 1e-9:
            raise ValidationError(
                f"position {x} m outside grid [{self.start_m}, {self.end_m}] m"
            )
        return i

    def index_range(self, lo_m, hi_m):
        """Indices i with lo_m <= coord(i) <= hi_m (may be empty)."""
        c = self.coords()
        return np.nonzero((c >= lo_m - 1e-9) & (c <= hi_m + 1e-9))[0]

    def decimate(self, block):
        """Grid of block centers for block-decimation by ``block`` samples."""
        n = self.count // block
        if n < 1:
            raise ValidationError("block larger than axis")
        return PositionGrid(
            self.start_m + self.spacing_m * (block - 1) / 2.0,
            self.spacing_m * block,
            n,
        )


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform frequency bins, in hertz. Same arithmetic as PositionGrid."""

    start_hz: float
    step_hz: float
    count: int

    def __post_init__(self):
        if not self.step_hz > 0:
            raise ValidationError(f"step_hz must be > 0, got {self.step_hz}")
        if self.count < 1:
            raise ValidationError(f"count must be >= 1, got {self.count}")

    @property
    def end_hz(self):
        return self.start_hz + self.step_hz * (self.count - 1)

    def coords(self):
        return self.start_hz + self.step_hz * np.arange(self.count)

    def index_to_coord(self, i):
        return self.start_hz + self.step_hz * i

    def coord_to_index(self, f):
        i = int(round((f - self.start_hz) / self.step_hz))
        if i < 0 or i >= self.count:
            raise ValidationError(f"frequency {f} Hz outside grid")
        return i


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sample instants: t0 + i * dt_s, i in [0, count)."""

    t0: datetime
    dt_s: float
    count: int

    def __post_init__(self):
        if not self.dt_s > 0:
            raise ValidationError(f"dt_s must be > 0, got {self.dt_s}")
        if self.count < 1:
            raise ValidationError(f"count must be >= 1, got {self.count}")
        if self.t0.tzinfo is None:
            object.__setattr__(self, "t0", self.t0.replace(tzinfo=timezone.utc))

    @property
    def fs_hz(self):
        return 1.0 / self.dt_s

    @property
    def duration_s(self):
        return self.dt_s * (self.count - 1)

    @property
    def t_end(self):
        return self.t0 + timedelta(seconds=self.duration_s)

    def offsets_s(self):
        """Seconds since t0 for every sample."""
        return self.dt_s * np.arange(self.count)

    def index_to_time(self, i):
        return self.t0 + timedelta(seconds=self.dt_s * i)

    def time_to_index(self, t):
        off = (parse_utc(t) if isinstance(t, str) else t) - self.t0
        i = int(round(off.total_seconds() / self.dt_s))
        if i < 0 or i >= self.count:
            raise ValidationError(f"time {t} outside grid")
        return i

    def seconds_to_index(self, seconds, clip=False):
        i = int(round(seconds / self.dt_s))
        if clip:
            return min(max(i, 0), self.count - 1)
        if i < 0 or i >= self.count:
            raise ValidationError(f"offset {seconds} s outside grid")
        return i

    def shifted(self, start_index, count):
        return TimeGrid(self.index_to_time(start_index), self.dt_s, count)

    def decimate(self, block):
        n = self.count // block
        if n < 1:
            raise ValidationError("block larger than axis")
        return TimeGrid(
            self.t0 + timedelta(seconds=self.dt_s * (block - 1) / 2.0),
            self.dt_s * block,
            n,
        )
