"""Wind vs. DAS activity correlation."""

import numpy as np

from ..core.series import Series, Waterfall
from ..errors import ValidationError


def segment_mean_activity(das_std: Waterfall, segment) -> Series:
    """Mean std-waterfall value over a [lo_m, hi_m] segment, per time block."""
    lo_m, hi_m = segment
    cols = das_std.axis.index_range(lo_m, hi_m)
    if len(cols) == 0:
        raise ValidationError(f"no std-waterfall columns inside [{lo_m}, {hi_m}] m")
    return Series(das_std.time, np.asarray(das_std.values)[:, cols].mean(axis=1),
                  das_std.unit)


def correlate_wind_activity(wind: Series, das_std: Waterfall, segment) -> float:
    """Pearson correlation between fused wind and segment-mean DAS std.

    Both series are resampled onto the coarser of the two time grids (over
    the overlap); fewer than 3 overlapping samples is an error. Pearson
    (not rank) correlation: the synthetic coupling is linear.
    """
    activity = segment_mean_activity(das_std, segment)
    a, b = (wind, activity) if wind.time.dt_s >= activity.time.dt_s else (activity, wind)
    # a is the coarser grid; interpolate b onto it over the overlap
    off = (b.time.t0 - a.time.t0).total_seconds()
    t_b = off + b.time.offsets_s()
    t_a = a.time.offsets_s()
    inside = (t_a >= t_b[0] - 1e-9) & (t_a <= t_b[-1] + 1e-9)
    if inside.sum() < 3:
        raise ValidationError("fewer than 3 overlapping samples between the series")
    x = a.values[inside]
    y = np.interp(t_a[inside], t_b, b.values)
    sx = x.std()
    sy = y.std()
    if sx == 0.0 or sy == 0.0:
        raise ValidationError("correlation undefined for a constant series")
    r = float(np.mean((x - x.mean()) * (y - y.mean())) / (sx * sy))
    return min(max(r, -1.0), 1.0)
