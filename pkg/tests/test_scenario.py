"""Scenario model and field synthesis."""

from datetime import timedelta

import numpy as np
import pytest

from fibersense.core import PositionGrid, TimeGrid
from fibersense.errors import ValidationError
from fibersense.scenario import (
    CableSegment,
    FieldSynthesizer,
    Scenario,
    ingest_wind_text,
    load_scenario,
    scenario_from_dict,
    scenario_to_dict,
    synthesize_field,
)
from fibersense.data import reference_scenario_path

from conftest import T0, small_scenario, wind_csv_text


def test_segments_must_tile():
    wind = ingest_wind_text(wind_csv_text())
    with pytest.raises(ValidationError, match="tile"):
        Scenario(segments=[CableSegment(0, 100, "onshore"),
                           CableSegment(150, 200, "fjord")], wind=wind, seed=1)
    with pytest.raises(ValidationError, match="start at 0"):
        Scenario(segments=[CableSegment(50, 100, "onshore")], wind=wind, seed=1)


def test_segment_at_covers_every_position(scenario):
    for x in np.linspace(0, scenario.length_m, 97):
        seg = scenario.segment_at(x)
        assert seg.start_m - 1e-9 <= x <= seg.end_m + 1e-9


def test_zero_wind_gives_zero_dynamic_and_static():
    calm = "\n".join(
        f"2025-08-05T{h:02d}:00:00Z,a,0.0" for h in range(10, 14)) + "\n"
    sc = small_scenario(wind=ingest_wind_text(calm))
    pos = PositionGrid(0.0, 50.0, 101)
    time = TimeGrid(T0.replace(hour=11), 1.0 / 600.0, 2048)
    field = synthesize_field(sc, pos, time)
    # tones are still injected (the offshore tone is always on); mask them
    quiet = pos.coords() < 9000
    assert np.all(field.dynamic[:, quiet] == 0.0)
    assert np.array_equal(field.static_profile_before, field.static_profile_after)


def test_static_offsets_from_peak_exceedance(scenario, das_grid):
    time = TimeGrid(T0, 1.0, 1)
    field = synthesize_field(scenario, das_grid, time)
    delta_ue = (field.static_profile_after - field.static_profile_before) * 1e6
    i = das_grid.coord_to_index(6000.0)  # inside the 180 ue segment
    assert delta_ue[i] == pytest.approx(180.0, rel=1e-6)
    i = das_grid.coord_to_index(750.0)
    assert delta_ue[i] == pytest.approx(82.0, rel=1e-6)
    assert delta_ue[das_grid.coord_to_index(3000.0)] == 0.0


def test_wind_scaling_scales_dynamic_std(storm_grid):
    # linear coupling: scaling wind by alpha scales the std by alpha
    # (checked at zero calm threshold where the law is exact)
    pos = PositionGrid(5000.0, 20.0, 51)
    base = small_scenario(calm_threshold_mps=0.0)
    scaled = small_scenario(calm_threshold_mps=0.0,
                            wind={k: type(v)(v.time, v.values * 2.0, v.unit)
                                  for k, v in base.wind.items()})
    f1 = synthesize_field(base, pos, storm_grid)
    f2 = synthesize_field(scaled, pos, storm_grid)
    s1 = f1.dynamic.std(axis=0)
    s2 = f2.dynamic.std(axis=0)
    assert np.allclose(s2, 2.0 * s1, rtol=1e-6)


def test_synthesis_bit_reproducible(scenario, storm_grid):
    pos = PositionGrid(0.0, 50.0, 241)
    a = synthesize_field(scenario, pos, storm_grid)
    b = synthesize_field(scenario, pos, storm_grid)
    assert np.array_equal(a.dynamic, b.dynamic)
    assert np.array_equal(a.static_profile_after, b.static_profile_after)


def test_streaming_tiles_match_in_memory(scenario):
    pos = PositionGrid(0.0, 100.0, 121)
    time = TimeGrid(T0, 1.0 / 600.0, 70000)  # crosses the 65536 tile boundary
    field = synthesize_field(scenario, pos, time)
    synth = FieldSynthesizer(scenario, pos, time, tag="field")
    rebuilt = np.empty_like(field.dynamic)
    for lo, chunk in synth.tiles():
        rebuilt[lo : lo + chunk.shape[0]] = chunk
    assert np.array_equal(field.dynamic, rebuilt)


def test_different_tags_different_noise(scenario, storm_grid):
    pos = PositionGrid(5000.0, 50.0, 21)
    a = synthesize_field(scenario, pos, storm_grid, tag="das")
    b = synthesize_field(scenario, pos, storm_grid, tag="sop")
    assert not np.allclose(a.dynamic, b.dynamic)


def test_grid_outside_cable_rejected(scenario):
    with pytest.raises(ValidationError, match="cable length"):
        synthesize_field(scenario, PositionGrid(0.0, 1000.0, 14),
                         TimeGrid(T0, 1.0, 16))


def test_grid_outside_wind_span_rejected(scenario):
    late = TimeGrid(T0 + timedelta(hours=4), 1.0, 60)
    with pytest.raises(ValidationError):
        synthesize_field(scenario, PositionGrid(0.0, 100.0, 11), late)


def test_peak_wind_is_grid_independent(scenario):
    assert scenario.peak_wind_mps() == pytest.approx(29.0, abs=0.05)


def test_tone_gating_by_storm_window(scenario):
    pos = PositionGrid(1500.0, 10.0, 5)  # inside the gated 2.2 Hz segment
    pre = TimeGrid(T0, 1.0 / 600.0, 4096)  # before the storm window
    field = synthesize_field(scenario, pos, pre)
    assert np.all(field.dynamic == 0.0)  # wind calm + tone gated off
    storm = TimeGrid(T0 + timedelta(seconds=180), 1.0 / 600.0, 4096)
    field2 = synthesize_field(scenario, pos, storm)
    assert field2.dynamic.std() > 0


def test_reference_scenario_loads_and_round_trips(tmp_path):
    sc = load_scenario(reference_scenario_path())
    assert sc.length_m == 118000.0
    assert sc.peak_wind_mps() == pytest.approx(29.0, abs=1e-6)
    doc = scenario_to_dict(sc, wind_csv="wind_desk.csv")
    import os
    import shutil

    shutil.copyfile(os.path.join(os.path.dirname(reference_scenario_path()),
                                 "wind_desk.csv"), tmp_path / "wind_desk.csv")
    sc2 = scenario_from_dict(doc, base_dir=str(tmp_path))
    assert sc2.segments == sc.segments
    assert sc2.seed == sc.seed
