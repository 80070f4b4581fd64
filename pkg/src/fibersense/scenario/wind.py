"""Wind data ingestion and fusion.

Wind CSVs carry ``timestamp,station_id,speed_mps`` rows (ISO-8601 UTC
timestamps). Each station must be sampled on its own uniform cadence with
strictly increasing timestamps; ingestion rejects malformed rows with the
offending line number.
"""

import csv
import io
import os

import numpy as np

from ..core.grids import TimeGrid, parse_utc
from ..core.series import Series
from ..errors import ValidationError


def ingest_wind(source):
    """Parse a wind CSV into one Series per station.

    ``source`` may be a path or an open text stream. Returns a dict mapping
    station_id to a Series in m/s on the station's native grid.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="") as fh:
            return ingest_wind(fh)
    name = getattr(source, "name", "<wind csv>")
    stations = {}
    rows = csv.reader(source)
    for ln, row in enumerate(rows, start=1):
        if not row or (ln == 1 and row[0].strip().lower() == "timestamp"):
            continue
        if len(row) != 3:
            raise ValidationError(f"{name}:{ln}: expected 3 columns, got {len(row)}")
        try:
            t = parse_utc(row[0])
            speed = float(row[2])
        except (ValidationError, ValueError) as exc:
            raise ValidationError(f"{name}:{ln}: {exc}") from None
        station = row[1].strip()
        if not station:
            raise ValidationError(f"{name}:{ln}: empty station id")
        if not (np.isfinite(speed) and speed >= 0):
            raise ValidationError(
                f"{name}:{ln}: wind speed must be finite and non-negative, got {speed}"
            )
        stations.setdefault(station, []).append((t, speed, ln))

    if not stations:
        raise ValidationError(f"{name}: no wind records")

    out = {}
    for station, samples in stations.items():
        times = [t for t, _, _ in samples]
        for (t_prev, _, _), (t_cur, _, ln) in zip(samples, samples[1:]):
            if t_cur == t_prev:
                raise ValidationError(f"{name}:{ln}: duplicated timestamp for {station}")
            if t_cur < t_prev:
                raise ValidationError(
                    f"{name}:{ln}: timestamps for {station} must be increasing"
                )
        if len(times) == 1:
            grid = TimeGrid(times[0], 1.0, 1)
        else:
            dt = (times[1] - times[0]).total_seconds()
            for i in range(2, len(times)):
                step = (times[i] - times[i - 1]).total_seconds()
                if abs(step - dt) > 1e-6 * max(1.0, dt):
                    raise ValidationError(
                        f"{name}:{samples[i][2]}: non-uniform sample interval for {station}"
                    )
            grid = TimeGrid(times[0], dt, len(times))
        out[station] = Series(grid, np.array([v for _, v, _ in samples]), "m/s")
    return out


def ingest_wind_text(text):
    """Convenience wrapper: ingest from a CSV string."""
    return ingest_wind(io.StringIO(text))


def fuse_wind(stations, grid: TimeGrid) -> Series:
    """Interpolate every station onto ``grid`` and average pointwise.

    Each grid point is the arithmetic mean over the stations whose span
    covers it; a point covered by no station is an error (there is no
    extrapolation).
    """
    if isinstance(stations, dict):
        stations = list(stations.values())
    if not stations:
        raise ValidationError("fuse_wind needs at least one station")
    t_out = grid.offsets_s()
    total = np.zeros(grid.count)
    count = np.zeros(grid.count)
    for s in stations:
        off0 = (s.time.t0 - grid.t0).total_seconds()
        t_st = off0 + s.time.offsets_s()
        inside = (t_out >= t_st[0] - 1e-9) & (t_out <= t_st[-1] + 1e-9)
        if not inside.any():
            continue
        total[inside] += np.interp(t_out[inside], t_st, s.values)
        count[inside] += 1
    if (count == 0).any():
        bad = int(np.nonzero(count == 0)[0][0])
        raise ValidationError(
            f"grid point {grid.index_to_time(bad)} lies outside every station's span"
        )
    return Series(grid, total / count, "m/s")
