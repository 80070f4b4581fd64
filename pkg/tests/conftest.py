"""Shared fixtures: compact scenarios and wind fixtures for fast tests."""

import math
import os
from datetime import datetime, timedelta, timezone

import numpy as np
import pytest

from fibersense.core import PositionGrid, TimeGrid
from fibersense.scenario import (
    CableSegment,
    Oscillation,
    Scenario,
    ingest_wind_text,
)

T0 = datetime(2025, 8, 5, 12, 0, tzinfo=timezone.utc)
DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def wind_csv_text(peak_mps=29.0, peak_s=300.0, cadence_s=30.0, span_s=(-60.0, 900.0),
                  offset=1.5):
    """Two-station storm CSV: fused profile is a cosine bump peaking at
    ``peak_mps`` at ``peak_s``."""
    rows = ["timestamp,station_id,speed_mps"]
    t = span_s[0]
    while t <= span_s[1] + 1e-9:
        base = 2.0 + (peak_mps - 2.0) * math.exp(-(((t - peak_s) / 150.0) ** 2))
        ts = (T0 + timedelta(seconds=t)).isoformat().replace("+00:00", "Z")
        rows.append(f"{ts},coastal,{base + offset:.6f}")
        rows.append(f"{ts},offshore,{max(base - offset, 0.0):.6f}")
        t += cadence_s
    return "\n".join(rows) + "\n"


def small_scenario(seed=42, **overrides):
    """A 12 km desk cable with the reference morphology, storm at 120-480 s."""
    storm = (T0 + timedelta(seconds=120), T0 + timedelta(seconds=480))
    segments = [
        CableSegment(0, 500, "onshore", coupling=0.004),
        CableSegment(500, 1000, "fjord", coupling=0.05, static_gain=82 / 26),
        CableSegment(1000, 2500, "fjord", coupling=0.04,
                     oscillation=Oscillation(2.2, 1.5, storm)),
        CableSegment(2500, 5000, "fjord", coupling=0.02),
        CableSegment(5000, 7000, "fjord", coupling=0.1115, static_gain=180 / 26),
        CableSegment(7000, 9000, "transition", coupling=0.0692),
        CableSegment(9000, 12000, "offshore", coupling=0.0308,
                     oscillation=Oscillation(2.4, 1.5, None)),
    ]
    params = dict(
        segments=segments,
        wind=ingest_wind_text(wind_csv_text()),
        seed=seed,
        storm_window=storm,
        das_phase_std_rad=0.03,
        botdr_single_shot_std=0.3,
        sop_detector_std=0.003,
    )
    params.update(overrides)
    return Scenario(**params)


@pytest.fixture
def scenario():
    return small_scenario()


@pytest.fixture
def storm_grid():
    """4 minutes at 600 Hz centered on the storm peak."""
    return TimeGrid(T0 + timedelta(seconds=180), 1.0 / 600.0, 600 * 240)


@pytest.fixture
def das_grid():
    return PositionGrid(0.0, 10.0, 1201)
