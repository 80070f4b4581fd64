"""Data containers: time series, position series and waterfalls."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import ValidationError
from .grids import FrequencyGrid, PositionGrid, TimeGrid

#: Allowed unit tags on series/waterfall values.
UNITS = frozenset(
    ["radian", "strain", "nstrain", "ustrain", "m/s", "dB", "dimensionless", "power"]
)


def _check_unit(unit):
    if unit not in UNITS:
        raise ValidationError(f"unknown unit tag {unit!r} (allowed: {sorted(UNITS)})")


@dataclass
class Series:
    """1-D values on a uniform time grid."""

    time: TimeGrid
    values: np.ndarray
    unit: str = "dimensionless"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        _check_unit(self.unit)
        if self.values.ndim != 1 or len(self.values) != self.time.count:
            raise ValidationError(
                f"series length {self.values.shape} != grid count {self.time.count}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("series contains non-finite values")

    def __len__(self):
        return self.time.count

    def slice_seconds(self, start_s, stop_s):
        """Sub-series covering [start_s, stop_s] relative to t0 (inclusive)."""
        i0 = self.time.seconds_to_index(start_s, clip=True)
        i1 = self.time.seconds_to_index(stop_s, clip=True)
        if i1 < i0:
            raise ValidationError("empty time slice")
        return Series(self.time.shifted(i0, i1 - i0 + 1), self.values[i0 : i1 + 1], self.unit)


@dataclass
class PositionSeries:
    """1-D values along the cable (e.g. a strain-difference profile).

    NaN marks a gap (an invalid fit); use ``valid`` to mask them.
    """

    position: PositionGrid
    values: np.ndarray
    unit: str = "dimensionless"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        _check_unit(self.unit)
        if self.values.ndim != 1 or len(self.values) != self.position.count:
            raise ValidationError("position series length mismatch")

    @property
    def valid(self):
        return np.isfinite(self.values)

    def __len__(self):
        return self.position.count


@dataclass
class Waterfall:
    """2-D float matrix [time, column-axis] with grid metadata.

    The column axis is a PositionGrid for time x position maps and a
    FrequencyGrid for spectrograms. ``validate=False`` skips the finiteness
    scan (used for memory-mapped payloads that were validated at write
    time).
    """

    time: TimeGrid
    axis: "PositionGrid | FrequencyGrid"
    values: np.ndarray
    unit: str = "dimensionless"
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        _check_unit(self.unit)
        if self.values.ndim != 2 or self.values.shape != (self.time.count, self.axis.count):
            raise ValidationError(
                f"waterfall shape {self.values.shape} != "
                f"(time={self.time.count}, axis={self.axis.count})"
            )
        if self.validate and not np.all(np.isfinite(self.values)):
            raise ValidationError("waterfall contains non-finite values")

    @property
    def shape(self):
        return self.values.shape

    def column(self, coord):
        """Values at the column nearest ``coord`` (errors outside the axis)."""
        j = self.axis.coord_to_index(coord)
        return np.asarray(self.values[:, j])

    def slice_seconds(self, start_s, stop_s):
        i0 = self.time.seconds_to_index(start_s, clip=True)
        i1 = self.time.seconds_to_index(stop_s, clip=True)
        if i1 < i0:
            raise ValidationError("empty time slice")
        return Waterfall(
            self.time.shifted(i0, i1 - i0 + 1),
            self.axis,
            np.asarray(self.values[i0 : i1 + 1]),
            self.unit,
            validate=False,
        )
