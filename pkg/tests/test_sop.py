"""SOP: cascade propagation, detection chain, Stokes processing."""

import numpy as np
import pytest

from fibersense.core import PositionGrid, TimeGrid, seeded_rng
from fibersense.errors import ValidationError
from fibersense.scenario import StrainField
from fibersense.sop import (
    PlateCascade,
    SopConfig,
    SopTrace,
    StateSeries,
    build_cascade,
    decimate_difference,
    detect,
    highpass_coefficients,
    propagate_polarization,
    sop_spectrogram,
    stokes_rms,
)

from conftest import T0, small_scenario


def make_cascade(axes, base, spans=None, gain=None):
    axes = np.atleast_2d(np.asarray(axes, dtype=np.float64))
    axes = axes / np.linalg.norm(axes, axis=1, keepdims=True)
    n = len(axes)
    if spans is None:
        spans = np.column_stack([np.arange(n) * 100.0, (np.arange(n) + 1) * 100.0])
    base = np.asarray(base, dtype=np.float64)
    gain = np.zeros(n) if gain is None else np.asarray(gain, dtype=np.float64)
    return PlateCascade(spans, axes, base, gain, np.array([0.0, 0.0, 1.0]))


def zero_field(n_pos, n_t, spacing=100.0, fs=600.0):
    return StrainField(PositionGrid(0.0, spacing, n_pos), TimeGrid(T0, 1 / fs, n_t),
                       np.zeros((n_t, n_pos), dtype=np.float32),
                       np.zeros(n_pos), np.zeros(n_pos))


def test_zero_field_zero_drift_constant_state():
    cfg = SopConfig(n_plates=3)
    casc = make_cascade(np.eye(3), [0.7, 1.1, 2.9])
    states = propagate_polarization(zero_field(4, 100, spacing=100.0), cfg, casc)
    assert np.allclose(states.states, states.states[0])


def test_half_wave_mirror_and_identity():
    cfg = SopConfig(n_plates=1)
    axis = np.array([0.0, 0.0, 1.0])
    casc = make_cascade([axis], [np.pi], spans=np.array([[0.0, 100.0]]))
    s_in = np.array(cfg.input_state)
    states = propagate_polarization(zero_field(2, 8), cfg, casc)
    mirror = 2 * axis * (axis @ s_in) - s_in
    assert np.allclose(states.states[0], mirror, atol=1e-12)
    # applying the half-wave twice restores the input
    casc2 = make_cascade([axis, axis], [np.pi, np.pi],
                         spans=np.array([[0.0, 50.0], [50.0, 100.0]]))
    states2 = propagate_polarization(zero_field(2, 8), cfg, casc2)
    assert np.allclose(states2.states[0], s_in, atol=1e-12)


def test_small_perturbation_linear_response():
    cfg = SopConfig(n_plates=2)
    rng = seeded_rng(4)
    axes = rng.standard_normal((2, 3))
    base = np.array([0.9, 2.2])
    delta = 1e-5
    casc0 = make_cascade(axes, base)
    casc1 = make_cascade(axes, base + np.array([delta, 0.0]))
    s0 = propagate_polarization(zero_field(3, 4), cfg, casc0).states[0]
    s1 = propagate_polarization(zero_field(3, 4), cfg, casc1).states[0]
    displacement = np.linalg.norm(s1 - s0)
    # analytic rotation derivative: |ds/dtheta| = |a x s| at the element
    a = casc0.axes[0]
    s_in = np.array(cfg.input_state)
    analytic = np.linalg.norm(np.cross(a, s_in)) * delta
    assert displacement == pytest.approx(analytic, rel=0.1)


def test_norm_preserved_through_storm_drive():
    sc = small_scenario()
    cfg = SopConfig(n_plates=16, strain_to_retardance_rad_per_ne=0.1,
                    rotation_drift_rad_s=0.01)
    casc = build_cascade(sc, cfg)
    from fibersense.scenario import synthesize_field
    from datetime import timedelta

    field = synthesize_field(sc, PositionGrid(0.0, 100.0, 121),
                             TimeGrid(T0 + timedelta(seconds=200), 1 / 600.0, 60000),
                             tag="sop")
    states = propagate_polarization(field, cfg, casc)
    drift = np.abs(np.linalg.norm(states.states, axis=1) - 1.0)
    assert drift.max() <= 1e-9


def test_build_cascade_spans_align_with_segments():
    sc = small_scenario()
    cfg = SopConfig(n_plates=32)
    casc = build_cascade(sc, cfg)
    assert casc.n_plates == 32
    edges = {s.start_m for s in sc.segments} | {sc.length_m}
    span_points = set(casc.spans_m.flatten())
    assert edges <= span_points  # every segment boundary is an element boundary
    assert np.allclose(casc.spans_m[1:, 0], casc.spans_m[:-1, 1])


def test_detect_dc_removed_for_parked_state():
    cfg = SopConfig(detector_noise_std=0.0)
    fs = cfg.sample_rate_hz
    grid = TimeGrid(T0, 1.0 / fs, int(fs * 10))
    states = np.tile([1.0, 0.0, 0.0], (grid.count, 1))  # s1 = +1 throughout
    trace = detect(StateSeries(grid, states), cfg)
    tail_x = trace.px[int(5 * fs):]
    tail_y = trace.py[int(5 * fs):]
    assert np.abs(tail_x).max() < 1e-4
    assert np.abs(tail_y).max() < 1e-4


@pytest.mark.parametrize("freq,expected_db,tol", [(0.2, -20.0, 0.5), (2.0, -3.0, 0.3)])
def test_highpass_response_points(freq, expected_db, tol):
    cfg = SopConfig(detector_noise_std=0.0)
    fs = cfg.sample_rate_hz
    dur = max(60.0, 10.0 / freq)
    grid = TimeGrid(T0, 1.0 / fs, int(fs * dur))
    t = grid.offsets_s()
    s1 = 0.9 * np.sin(2 * np.pi * freq * t)
    states = np.column_stack([s1, np.sqrt(1 - s1**2), np.zeros_like(s1)])
    trace = detect(StateSeries(grid, states), cfg)
    skip = int(10.0 / freq * fs * 0.2) + int(2 * fs)
    out_rms = np.sqrt(np.mean(trace.px[skip:].astype(np.float64) ** 2))
    in_rms = cfg.total_power * 0.9 / (2 * np.sqrt(2))
    gain_db = 20 * np.log10(out_rms / in_rms)
    assert gain_db == pytest.approx(expected_db, abs=tol)


def test_stokes_symmetric_channels_near_zero():
    rng = seeded_rng(9)
    fs = 1000.0
    grid = TimeGrid(T0, 1 / fs, 50000)
    px = rng.standard_normal(50000).astype(np.float32) * 0.01
    py = rng.standard_normal(50000).astype(np.float32) * 0.01
    summary = stokes_rms(SopTrace(grid, px, py), 5.0)
    assert np.all(np.abs(summary.series.values) < 0.05)


def test_stokes_one_sided_equals_one():
    fs = 1000.0
    grid = TimeGrid(T0, 1 / fs, 10000)
    t = np.arange(10000) / fs
    px = (0.1 * np.sin(2 * np.pi * 5 * t)).astype(np.float32)
    py = np.zeros(10000, dtype=np.float32)
    summary = stokes_rms(SopTrace(grid, px, py), 1.0)
    assert np.allclose(summary.series.values, 1.0)
    assert np.all(np.abs(summary.series.values) <= 1.0)


def test_stokes_window_validation():
    grid = TimeGrid(T0, 1.0, 100)
    trace = SopTrace(grid, np.zeros(100, np.float32), np.zeros(100, np.float32))
    with pytest.raises(ValidationError, match="10-sample"):
        stokes_rms(trace, 5.0)  # 5 samples at 1 Hz
    with pytest.raises(ValidationError, match="shorter"):
        stokes_rms(trace, 200.0)


def test_stokes_noise_floor_flagging():
    grid = TimeGrid(T0, 1e-3, 20000)
    rng = seeded_rng(10)
    px = rng.standard_normal(20000).astype(np.float32) * 0.001
    py = rng.standard_normal(20000).astype(np.float32) * 0.001
    summary = stokes_rms(SopTrace(grid, px, py), 1.0, noise_floor=0.01)
    assert not summary.valid.any()
    assert np.all(summary.series.values == 0.0)


def tone_trace(freqs_amps, dur=120.0, noise=0.0005, seed=3):
    cfg = SopConfig(detector_noise_std=noise)
    fs = cfg.sample_rate_hz
    grid = TimeGrid(T0, 1 / fs, int(fs * dur))
    t = grid.offsets_s()
    s1 = sum(a * np.sin(2 * np.pi * f * t) for f, a in freqs_amps)
    s1 = np.asarray(s1) if freqs_amps else np.zeros(grid.count)
    states = np.column_stack([s1, np.sqrt(1 - s1**2), np.zeros_like(s1)])
    return detect(StateSeries(grid, states), cfg, seed=seed)


def test_sop_spectrogram_tone_peak():
    trace = tone_trace([(2.2, 0.05)])
    spec = sop_spectrogram(trace, window_len=4096)
    avg = spec.values.mean(axis=0)
    peak_hz = spec.axis.index_to_coord(int(np.argmax(avg)))
    assert abs(peak_hz - 2.2) <= 0.1


def test_sop_spectrogram_noise_only_no_detections():
    from fibersense.analysis import find_tones

    trace = tone_trace([], dur=240.0)
    spec = sop_spectrogram(trace, window_len=4096)
    assert find_tones(spec, (1.5, 3.0), prominence_db=6.0) == []


def test_decimation_does_not_move_peak():
    trace = tone_trace([(2.3, 0.05)])
    a = sop_spectrogram(trace, window_len=4096, max_fs=200.0)
    b = sop_spectrogram(trace, window_len=8192, max_fs=400.0)
    fa = a.axis.index_to_coord(int(np.argmax(a.values.mean(axis=0))))
    fb = b.axis.index_to_coord(int(np.argmax(b.values.mean(axis=0))))
    assert abs(fa - fb) <= max(a.axis.step_hz, b.axis.step_hz)


def test_global_input_rotation_keeps_tone_frequencies():
    # tone-only drive: zero coupling, so the cascade sees just the two
    # injected oscillations; rotating the input polarization must change
    # the s1 trace but not the frequencies the spectrogram detects
    from dataclasses import replace
    from datetime import timedelta

    from fibersense.scenario import synthesize_field

    base = small_scenario()
    sc = small_scenario(segments=[replace(s, coupling=0.0) for s in base.segments])
    field = synthesize_field(sc, PositionGrid(0.0, 100.0, 121),
                             TimeGrid(T0 + timedelta(seconds=200), 1 / 600.0, 72000),
                             tag="sop")
    peaks = {}
    traces = {}
    for state in ((0.0, 1.0, 0.0), (1.0, 0.0, 0.0)):
        cfg = SopConfig(n_plates=16, strain_to_retardance_rad_per_ne=0.3,
                        detector_noise_std=0.0, input_state=state)
        casc = build_cascade(sc, cfg)
        trace = detect(propagate_polarization(field, cfg, casc), cfg, seed=1)
        spec = sop_spectrogram(trace, window_len=4096)
        avg = spec.values.mean(axis=0)
        freqs = spec.axis.coords()
        found = []
        for lo, hi in ((2.1, 2.3), (2.3, 2.5)):
            band = np.nonzero((freqs >= lo) & (freqs <= hi))[0]
            found.append(float(freqs[band[np.argmax(avg[band])]]))
        peaks[state] = found
        traces[state] = trace
    vals = list(peaks.values())
    assert vals[0] == vals[1]
    # but the s1 traces themselves differ
    assert not np.allclose(traces[(0.0, 1.0, 0.0)].px, traces[(1.0, 0.0, 0.0)].px)


def test_decimate_difference_metadata():
    trace = tone_trace([(2.2, 0.02)], dur=30.0)
    dec = decimate_difference(trace, max_fs=200.0)
    assert dec.time.fs_hz <= 200.0
    assert dec.time.t0 == trace.time.t0


def test_highpass_coefficients_documented_form():
    cfg = SopConfig()
    b, a = highpass_coefficients(cfg)
    k = np.tan(np.pi * cfg.highpass_corner_hz / cfg.sample_rate_hz)
    assert b[0] == pytest.approx(1 / (1 + k))
    assert b[1] == pytest.approx(-1 / (1 + k))
    assert a[1] == pytest.approx((k - 1) / (1 + k))
