"""CSV formats for 1-D series.

Time series: two columns ``timestamp,value`` with ISO-8601 UTC timestamps.
Position series: two columns ``position_m,value``. Values are written with
``repr`` so they round-trip exactly.
"""

import csv

import numpy as np

from ..core.grids import PositionGrid, TimeGrid, format_utc, parse_utc
from ..core.series import PositionSeries, Series
from ..errors import FormatError, ValidationError


def write_series_csv(path, s: Series):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["timestamp", "value"])
        for i, v in enumerate(s.values):
            w.writerow([format_utc(s.time.index_to_time(i)), repr(float(v))])


def read_series_csv(path, unit="dimensionless") -> Series:
    """Read a timestamp,value CSV back onto a uniform grid."""
    times, values = [], []
    with open(path, newline="") as fh:
        rows = csv.reader(fh)
        for ln, row in enumerate(rows, start=1):
            if ln == 1 and row and row[0].strip().lower() == "timestamp":
                continue
            if len(row) != 2:
                raise FormatError(f"{path}:{ln}: expected 2 columns, got {len(row)}")
            try:
                times.append(parse_utc(row[0]))
                values.append(float(row[1]))
            except (ValidationError, ValueError) as exc:
                raise FormatError(f"{path}:{ln}: {exc}") from None
    if not times:
        raise FormatError(f"{path}: no data rows")
    if len(times) == 1:
        grid = TimeGrid(times[0], 1.0, 1)
    else:
        dt = (times[1] - times[0]).total_seconds()
        if dt <= 0:
            raise FormatError(f"{path}: non-increasing timestamps")
        for i in range(2, len(times)):
            step = (times[i] - times[i - 1]).total_seconds()
            if abs(step - dt) > 1e-6 * max(1.0, dt):
                raise FormatError(f"{path}:{i + 2}: non-uniform sample interval")
        grid = TimeGrid(times[0], dt, len(times))
    return Series(grid, np.asarray(values), unit)


def write_position_series_csv(path, s: PositionSeries):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["position_m", "value"])
        for i, v in enumerate(s.values):
            w.writerow([repr(float(s.position.index_to_coord(i))), repr(float(v))])


def read_position_series_csv(path, unit="dimensionless") -> PositionSeries:
    coords, values = [], []
    with open(path, newline="") as fh:
        rows = csv.reader(fh)
        for ln, row in enumerate(rows, start=1):
            if ln == 1 and row and row[0].strip().lower() == "position_m":
                continue
            if len(row) != 2:
                raise FormatError(f"{path}:{ln}: expected 2 columns, got {len(row)}")
            try:
                coords.append(float(row[0]))
                values.append(float(row[1]))
            except ValueError as exc:
                raise FormatError(f"{path}:{ln}: {exc}") from None
    if not coords:
        raise FormatError(f"{path}: no data rows")
    if len(coords) == 1:
        grid = PositionGrid(coords[0], 1.0, 1)
    else:
        spacing = coords[1] - coords[0]
        grid = PositionGrid(coords[0], spacing, len(coords))
        if not np.allclose(np.diff(coords), spacing, rtol=1e-9, atol=1e-9):
            raise FormatError(f"{path}: non-uniform position spacing")
    return PositionSeries(grid, np.asarray(values), unit)
