"""BOTDR: scan arithmetic, spectra, fitting, strain differences."""

import numpy as np
import pytest

from fibersense.botdr import (
    BotdrConfig,
    SpectrumStack,
    fit_bfs,
    pulse_to_resolution,
    scan_frequency_grid,
    scan_grid,
    simulate_spectra,
    strain_difference,
)
from fibersense.core import PositionGrid, TimeGrid
from fibersense.errors import ValidationError
from fibersense.scenario import StrainField

from conftest import T0


def static_field(profile_after_ue, spacing=10.0):
    profile = np.asarray(profile_after_ue, dtype=np.float64) * 1e-6
    pos = PositionGrid(0.0, spacing, len(profile))
    time = TimeGrid(T0, 1.0, 1)
    return StrainField(pos, time, np.zeros((1, len(profile)), dtype=np.float32),
                       np.zeros(len(profile)), profile)


def lorentz(nu, center, gamma_hz, amp=1.0):
    h = (gamma_hz / 2.0) ** 2
    return amp * h / ((nu - center) ** 2 + h)


def stack_from_centers(centers_hz, cfg, amp=1.0, noise=None):
    nu = scan_grid(cfg)
    power = lorentz(nu[None, :], np.asarray(centers_hz)[:, None], cfg.linewidth_hz, amp)
    if noise is not None:
        power = np.maximum(power + noise, 0.0)
    return SpectrumStack(PositionGrid(0.0, 10.0, len(centers_hz)),
                         scan_frequency_grid(cfg), power)


def test_scan_grid_defaults_71_points():
    g = scan_grid(BotdrConfig())
    assert len(g) == 71
    assert g[0] == 10.60e9 and g[-1] == 10.67e9
    assert np.allclose(np.diff(g), 1e6)


def test_scan_grid_degenerate_and_coarse():
    g = scan_grid(BotdrConfig(scan_start_hz=10.63e9, scan_stop_hz=10.63e9))
    assert len(g) == 1
    g = scan_grid(BotdrConfig(scan_start_hz=10.63e9, scan_stop_hz=10.64e9,
                              scan_step_hz=2e6))
    assert len(g) == 6


def test_scan_step_must_divide_span():
    with pytest.raises(ValidationError, match="divide"):
        BotdrConfig(scan_step_hz=3e6)


def test_pulse_to_resolution_values():
    assert pulse_to_resolution(2.5e-6) == pytest.approx(255.0, rel=0.005)
    assert pulse_to_resolution(16e-6) == pytest.approx(1635.0, rel=0.005)
    assert pulse_to_resolution(500e-9) == pytest.approx(51.0, rel=0.005)
    # matches the nominal instrument figures within 3 percent
    assert pulse_to_resolution(2.5e-6) == pytest.approx(250.0, rel=0.03)
    assert pulse_to_resolution(16e-6) == pytest.approx(1600.0, rel=0.03)


def test_noiseless_spectrum_peaks_at_base_bfs():
    cfg = BotdrConfig()
    stack = simulate_spectra(static_field(np.zeros(8)), "before", cfg)
    nu = scan_grid(cfg)
    assert np.all(nu[np.argmax(stack.power, axis=1)] == cfg.base_bfs_hz)


def test_strain_shifts_peak_9mhz_for_180ue():
    cfg = BotdrConfig()
    # wide uniform block so the spatial box average is a no-op at center
    stack = simulate_spectra(static_field(np.full(101, 180.0)), "after", cfg)
    prof = fit_bfs(stack, cfg)
    assert prof.bfs_hz[50] == pytest.approx(cfg.base_bfs_hz + 9e6, abs=0.05e6)


def test_averaging_law_noise_ratio():
    rng_field = static_field(np.zeros(400))
    noisy = dict(single_shot_noise_std=0.3)
    resid = {}
    for n_avg in (1, 4000):
        cfg = BotdrConfig(averages=n_avg, **noisy)
        stack = simulate_spectra(rng_field, "before", cfg, seed=7)
        clean = simulate_spectra(rng_field, "before",
                                 BotdrConfig(averages=n_avg), seed=7)
        r = stack.power - clean.power
        # clipping at zero censors the deep-tail negatives at N=1; measure
        # noise where the clean spectrum is high enough to stay positive
        mask = clean.power > 0.55
        resid[n_avg] = r[mask].std()
    ratio = resid[1] / resid[4000]
    assert ratio == pytest.approx(np.sqrt(4000), rel=0.1)


def test_out_of_range_bfs_still_generates_but_flags():
    cfg = BotdrConfig()
    stack = simulate_spectra(static_field(np.full(8, 2000.0)), "after", cfg)
    assert np.all(np.isfinite(stack.power))
    prof = fit_bfs(stack, cfg)
    assert not prof.valid.any()


def test_fit_noiseless_exact():
    cfg = BotdrConfig()
    prof = fit_bfs(stack_from_centers([10.630e9] * 4, cfg), cfg)
    assert np.all(np.abs(prof.bfs_hz - 10.630e9) < 0.05e6)
    assert np.all(prof.fit_quality < 1e-8)


def test_fit_subgrid_center():
    cfg = BotdrConfig()
    prof = fit_bfs(stack_from_centers([10.6305e9] * 4, cfg), cfg)
    assert np.all(np.abs(prof.bfs_hz - 10.6305e9) < 0.1e6)


def test_fit_needs_five_points():
    cfg = BotdrConfig(scan_start_hz=10.63e9, scan_stop_hz=10.633e9, scan_step_hz=1e6)
    with pytest.raises(ValidationError, match="5 frequency points"):
        fit_bfs(stack_from_centers([10.631e9], cfg), cfg)


def test_fit_flat_spectrum_flagged_not_thrown():
    cfg = BotdrConfig()
    stack = SpectrumStack(PositionGrid(0.0, 10.0, 3), scan_frequency_grid(cfg),
                          np.full((3, cfg.scan_points), 0.25))
    prof = fit_bfs(stack, cfg)
    assert not prof.valid.any()
    assert np.all(np.isnan(prof.bfs_hz))


def test_fit_monte_carlo_std_at_n4000():
    cfg = BotdrConfig(single_shot_noise_std=0.3, averages=4000)
    rng = np.random.default_rng(11)
    noise = rng.standard_normal((200, cfg.scan_points)) * (0.3 / np.sqrt(4000))
    prof = fit_bfs(stack_from_centers([10.6312e9] * 200, cfg, noise=noise), cfg)
    assert prof.valid.all()
    assert prof.bfs_hz.std() <= 0.5e6


def test_fit_shift_equivariance():
    cfg = BotdrConfig()
    base = 10.625e9
    for delta in (0.4e6, 1.7e6, 5.0e6):
        p0 = fit_bfs(stack_from_centers([base] * 3, cfg), cfg)
        p1 = fit_bfs(stack_from_centers([base + delta] * 3, cfg), cfg)
        shift = p1.bfs_hz - p0.bfs_hz
        assert np.all(np.abs(shift - delta) < 0.1e6)


def test_fit_amplitude_scaling_invariance():
    cfg = BotdrConfig()
    a = fit_bfs(stack_from_centers([10.6281e9] * 3, cfg, amp=1.0), cfg)
    b = fit_bfs(stack_from_centers([10.6281e9] * 3, cfg, amp=7.3), cfg)
    assert np.allclose(a.bfs_hz, b.bfs_hz, atol=10.0)


def test_strain_difference_identity_and_errors():
    cfg = BotdrConfig()
    prof = fit_bfs(stack_from_centers([10.63e9] * 6, cfg), cfg)
    delta = strain_difference(prof, prof, cfg)
    assert np.allclose(delta.values, 0.0, atol=1e-3)
    assert delta.unit == "ustrain"
    other = fit_bfs(stack_from_centers([10.63e9] * 5, cfg), cfg)
    with pytest.raises(ValidationError, match="grids"):
        strain_difference(prof, other, cfg)


def test_round_trip_injected_staircase():
    cfg = BotdrConfig(single_shot_noise_std=0.3, averages=4000)
    profile = np.zeros(1201)
    pos = np.arange(1201) * 10.0
    profile[(pos >= 5000) & (pos < 7000)] = 180.0
    profile[(pos >= 500) & (pos < 1000)] = 82.0
    field = static_field(profile)
    before = fit_bfs(simulate_spectra(field, "before", cfg, seed=3), cfg)
    after = fit_bfs(simulate_spectra(field, "after", cfg, seed=3), cfg)
    delta = strain_difference(before, after, cfg)
    assert delta.values[600] == pytest.approx(180.0, rel=0.05)
    assert delta.values[75] == pytest.approx(82.0, rel=0.05)
    assert abs(delta.values[300]) < 5.0


def test_resolution_property_impulse_width():
    # a strain impulse much narrower than the pulse cell appears with the
    # cell's width (box response)
    cfg = BotdrConfig(pulse_width_us=16.0)
    res = pulse_to_resolution(16e-6, cfg.group_index)
    profile = np.zeros(801)
    profile[400] = 100.0
    field = static_field(profile, spacing=10.0)
    before = fit_bfs(simulate_spectra(field, "before", cfg), cfg)
    after = fit_bfs(simulate_spectra(field, "after", cfg), cfg)
    delta = strain_difference(before, after, cfg).values
    peak = np.nanmax(delta)
    above = np.nonzero(delta > 0.5 * peak)[0]
    width_m = (above[-1] - above[0] + 1) * 10.0
    assert width_m == pytest.approx(res, rel=0.2)
