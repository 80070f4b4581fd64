"""Pipeline stages behind the CLI verbs.

Every stage streams: the full-scale DAS record never fits in memory, so
simulation writes tiles as they are synthesized and processing runs a
single pass over the memory-mapped record feeding all accumulators at
once. Each stage ends by writing a manifest of artifact hashes, which is
what the determinism guarantee is checked against.
"""

import os

import numpy as np

from ..analysis import (
    build_report,
    correlate_wind_activity,
    find_tones,
)
from ..botdr import (
    fit_bfs,
    pulse_to_resolution,
    scan_frequency_grid,
    simulate_spectra,
    strain_difference,
    SpectrumStack,
)
from ..botdr.fit import BfsProfile
from ..core.grids import PositionGrid, TimeGrid, format_utc
from ..core.series import PositionSeries, Series, Waterfall
from ..core.spectral import stft_spectrogram
from ..core.stats import BlockStdAccumulator
from ..das import BandPowerMap, PhaseSimulator, UnwrapScan, std_waterfall
from ..errors import FormatError, ValidationError
from ..io import (
    TraceWriter,
    WaterfallWriter,
    hash_file,
    open_trace,
    open_waterfall,
    read_position_series_csv,
    read_series_csv,
    read_waterfall,
    write_manifest,
    write_position_series_csv,
    write_series_csv,
    write_waterfall,
)
from ..scenario import FieldSynthesizer, fuse_wind, synthesize_field
from ..sop import (
    Detector,
    SopTrace,
    StateSeries,
    build_cascade,
    retardance_matrix,
    sop_spectrogram,
    span_mean_matrix,
    stokes_rms,
)
from ..sop.propagate import _full_axes
from .._kernels import cascade_states
from .runconfig import RunConfig

PROCESS_CHUNK = 65536


def _artifact(outdir, rel, info=None):
    """(name, entry) pair for the manifest; hashes on demand."""
    full = os.path.join(outdir, rel)
    entry = {"path": rel}
    if info:
        entry.update({"sha256": info["sha256"], "bytes": info["bytes"]})
    else:
        entry.update({"sha256": hash_file(full), "bytes": os.path.getsize(full)})
    return rel, entry


def _ensure_dirs(outdir, *subs):
    for s in subs:
        os.makedirs(os.path.join(outdir, s), exist_ok=True)


# ---------------------------------------------------------------- simulate


def simulate_das(run: RunConfig):
    """Synthesize the DAS-grid field and forward-model the phase record.

    One pass: each synthesis tile is written to the field waterfall, folded
    into the ground-truth block-std accumulator, pushed through the phase
    forward model and written to the phase record.
    """
    out = run.output_dir
    _ensure_dirs(out, "field", "das")
    sc = run.scenario
    cfg = run.das.das_config(sc)
    pos = run.das.position_grid()
    time = run.das.time_grid(run.t0, cfg.prf_hz)

    synth = FieldSynthesizer(sc, pos, time, tag="das")
    sim = PhaseSimulator(cfg, pos.spacing_m, pos.count, run.seed,
                         cable_length_m=sc.length_m)
    truth = BlockStdAccumulator(time.count, pos.count, run.das.block_t, run.das.block_x)

    artifacts = {}
    with WaterfallWriter(os.path.join(out, "field/dynamic.wf"), time, pos, "strain") as fw, \
         WaterfallWriter(os.path.join(out, "das/phase.wf"), time, pos, "radian") as pw:
        for lo, chunk in synth.tiles():
            fw.append(chunk)
            truth.update(chunk)
            pw.append(sim.tile(lo, chunk))
        artifacts.update([_artifact(out, "field/dynamic.wf", fw.close())])
        artifacts.update([_artifact(out, "das/phase.wf", pw.close())])

    before, after = synth.static_profiles()
    write_position_series_csv(os.path.join(out, "field/static_before.csv"),
                              PositionSeries(pos, before, "strain"))
    write_position_series_csv(os.path.join(out, "field/static_after.csv"),
                              PositionSeries(pos, after, "strain"))
    write_position_series_csv(os.path.join(out, "field/temperature_delta.csv"),
                              PositionSeries(pos, np.zeros(pos.count), "dimensionless"))

    truth_std = truth.finalize(demean=False) * 1e9
    write_waterfall(os.path.join(out, "das/truth_std.wf"),
                    Waterfall(time.decimate(run.das.block_t),
                              pos.decimate(run.das.block_x), truth_std, "nstrain"))

    for rel in ("field/static_before.csv", "field/static_after.csv",
                "field/temperature_delta.csv", "das/truth_std.wf"):
        artifacts.update([_artifact(out, rel)])
    return artifacts


def simulate_botdr(run: RunConfig):
    """Static-epoch spectra over the whole cable (degenerate time grid)."""
    out = run.output_dir
    _ensure_dirs(out, "botdr")
    sc = run.scenario
    cfg = run.botdr.botdr_config(sc)
    pos = run.botdr.position_grid(sc.length_m)
    field = synthesize_field(sc, pos, TimeGrid(run.t0, 1.0, 1), tag="botdr")

    artifacts = {}
    for epoch in ("before", "after"):
        stack = simulate_spectra(field, epoch, cfg, seed=run.seed)
        rel = f"botdr/spectra_{epoch}.wf"
        with WaterfallWriter(os.path.join(out, rel), stack.position,
                             stack.frequency, "power") as w:
            w.append(stack.power)
            artifacts.update([_artifact(out, rel, w.close())])
        rel_truth = f"botdr/truth_static_{epoch}.csv"
        profile = field.static_profile_before if epoch == "before" else field.static_profile_after
        write_position_series_csv(os.path.join(out, rel_truth),
                                  PositionSeries(pos, profile, "strain"))
        artifacts.update([_artifact(out, rel_truth)])
    return artifacts


def simulate_sop(run: RunConfig):
    """Drive the plate cascade from a coarse whole-cable field, detect, write."""
    out = run.output_dir
    _ensure_dirs(out, "sop")
    sc = run.scenario
    cfg = run.sop.sop_config(sc)
    cascade = build_cascade(sc, cfg)
    pos, drv_time = run.sop.driver_grids(run.t0, sc.length_m)

    mat = span_mean_matrix(pos, cascade.spans_m)
    if (mat.sum(axis=0) == 0).any():
        raise ValidationError("SOP driver grid too coarse for the plate spans")
    synth = FieldSynthesizer(sc, pos, drv_time, tag="sop")
    strain_ne = np.empty((drv_time.count, cascade.n_plates), dtype=np.float32)
    for lo, chunk in synth.tiles():
        strain_ne[lo : lo + chunk.shape[0]] = (chunk.astype(np.float64) @ mat) * 1e9

    states = np.empty((drv_time.count, 3))
    s0 = np.asarray(cfg.input_state, dtype=np.float64)
    s0 /= np.linalg.norm(s0)
    offsets = drv_time.offsets_s()
    for lo in range(0, drv_time.count, PROCESS_CHUNK):
        hi = min(lo + PROCESS_CHUNK, drv_time.count)
        theta = retardance_matrix(strain_ne[lo:hi].astype(np.float64), cascade, cfg,
                                  offsets[lo:hi])
        states[lo:hi] = cascade_states(theta, _full_axes(cascade, cfg), s0)
    state_series = StateSeries(drv_time, states)

    trace_time = run.sop.trace_grid(run.t0, cfg.sample_rate_hz)
    det = Detector(cfg, state_series, trace_time, seed=run.seed)
    rel = "sop/trace.tr"
    with TraceWriter(os.path.join(out, rel), trace_time) as w:
        for _, (px, py) in det.tiles():
            w.append(px, py)
        info = w.close()
    return dict([_artifact(out, rel, info)])


_SIMULATORS = {"das": simulate_das, "botdr": simulate_botdr, "sop": simulate_sop}


# ----------------------------------------------------------------- process


def process_das(run: RunConfig, block_t=None, block_x=None):
    """Single streaming pass over the phase record feeding every sink."""
    out = run.output_dir
    _ensure_dirs(out, "das")
    sc = run.scenario
    cfg = run.das.das_config(sc)
    record = read_waterfall(os.path.join(out, "das/phase.wf"), mmap=True)
    time, pos = record.time, record.axis
    if not isinstance(pos, PositionGrid):
        raise FormatError("das/phase.wf: expected a position column axis")
    block_t = block_t or run.das.block_t
    block_x = block_x or run.das.block_x
    k_ne = cfg.strain_per_radian * 1e9

    acc = BlockStdAccumulator(time.count, pos.count, block_t, block_x)
    scan = UnwrapScan(pos.count)
    bp_window = int(round(run.das.bandpower_window_s / time.dt_s))
    bandpower = [BandPowerMap(f, time, pos, bp_window) for f in run.das.tone_freqs_hz]
    spec_cols = [pos.coord_to_index(p) for p in run.das.spectrogram_positions_m]
    cols = np.empty((time.count, len(spec_cols)), dtype=np.float32)

    for lo in range(0, time.count, PROCESS_CHUNK):
        chunk = scan.update(np.asarray(record.values[lo : lo + PROCESS_CHUNK]))
        acc.update(chunk)
        strain = chunk * np.float32(k_ne)
        for bp in bandpower:
            bp.update(strain)
        cols[lo : lo + chunk.shape[0]] = strain[:, spec_cols]

    artifacts = {}
    std = Waterfall(time.decimate(block_t), pos.decimate(block_x),
                    acc.finalize(demean=True) * k_ne, "nstrain")
    write_waterfall(os.path.join(out, "das/std.wf"), std)
    artifacts.update([_artifact(out, "das/std.wf")])

    for j, pos_m in enumerate(run.das.spectrogram_positions_m):
        series = Series(time, cols[:, j].astype(np.float64) - cols[:, j].mean(),
                        "nstrain")
        spec = stft_spectrogram(series, run.das.stft_window, 0.5)
        rel = f"das/spectrogram_{pos_m:g}m.wf"
        write_waterfall(os.path.join(out, rel), spec)
        artifacts.update([_artifact(out, rel)])

    for freq, bp in zip(run.das.tone_freqs_hz, bandpower):
        rel = f"das/bandpower_{freq:g}hz.wf"
        write_waterfall(os.path.join(out, rel), bp.waterfall())
        artifacts.update([_artifact(out, rel)])
    return artifacts


def process_botdr(run: RunConfig):
    out = run.output_dir
    _ensure_dirs(out, "botdr")
    sc = run.scenario
    cfg = run.botdr.botdr_config(sc)

    artifacts = {}
    profiles = {}
    for epoch in ("before", "after"):
        row_axis, col_axis, unit, values = open_waterfall(
            os.path.join(out, f"botdr/spectra_{epoch}.wf"))
        if not isinstance(row_axis, PositionGrid):
            raise FormatError(f"spectra_{epoch}.wf: expected position rows")
        expected = scan_frequency_grid(cfg)
        if (col_axis.count != expected.count
                or abs(col_axis.start_hz - expected.start_hz) > 1.0):
            raise FormatError(
                f"spectra_{epoch}.wf scan grid does not match the configured scan"
            )
        stack = SpectrumStack(row_axis, col_axis, np.array(values, dtype=np.float64))
        profiles[epoch] = fit_bfs(stack, cfg)
        rel = f"botdr/bfs_{epoch}.csv"
        write_position_series_csv(
            os.path.join(out, rel),
            PositionSeries(row_axis, profiles[epoch].bfs_hz, "dimensionless"))
        artifacts.update([_artifact(out, rel)])
        rel_q = f"botdr/fit_quality_{epoch}.csv"
        write_position_series_csv(
            os.path.join(out, rel_q),
            PositionSeries(row_axis, profiles[epoch].fit_quality, "dimensionless"))
        artifacts.update([_artifact(out, rel_q)])

    delta = strain_difference(profiles["before"], profiles["after"], cfg)
    write_position_series_csv(os.path.join(out, "botdr/delta_eps.csv"), delta)
    artifacts.update([_artifact(out, "botdr/delta_eps.csv")])
    return artifacts


def simulate_botdr_epochs(run: RunConfig, which="both"):
    """Granular verb: simulate one epoch's spectra (or both)."""
    out = run.output_dir
    _ensure_dirs(out, "botdr")
    sc = run.scenario
    cfg = run.botdr.botdr_config(sc)
    pos = run.botdr.position_grid(sc.length_m)
    field = synthesize_field(sc, pos, TimeGrid(run.t0, 1.0, 1), tag="botdr")
    epochs = ("before", "after") if which == "both" else (which,)
    artifacts = {}
    for epoch in epochs:
        stack = simulate_spectra(field, epoch, cfg, seed=run.seed)
        rel = f"botdr/spectra_{epoch}.wf"
        with WaterfallWriter(os.path.join(out, rel), stack.position,
                             stack.frequency, "power") as w:
            w.append(stack.power)
            artifacts.update([_artifact(out, rel, w.close())])
    return artifacts


def _load_stack(run: RunConfig, epoch) -> SpectrumStack:
    cfg = run.botdr.botdr_config(run.scenario)
    path = os.path.join(run.output_dir, f"botdr/spectra_{epoch}.wf")
    row_axis, col_axis, unit, values = open_waterfall(path)
    if not isinstance(row_axis, PositionGrid):
        raise FormatError(f"{path}: expected position rows")
    expected = scan_frequency_grid(cfg)
    if col_axis.count != expected.count or abs(col_axis.start_hz - expected.start_hz) > 1.0:
        raise FormatError(f"{path}: scan grid does not match the configured scan")
    return SpectrumStack(row_axis, col_axis, np.array(values, dtype=np.float64))


def botdr_fit_epochs(run: RunConfig):
    """Granular verb: fit BFS profiles for every epoch stack present."""
    out = run.output_dir
    cfg = run.botdr.botdr_config(run.scenario)
    artifacts = {}
    found = False
    for epoch in ("before", "after"):
        if not os.path.exists(os.path.join(out, f"botdr/spectra_{epoch}.wf")):
            continue
        found = True
        profile = fit_bfs(_load_stack(run, epoch), cfg)
        for rel, vals in ((f"botdr/bfs_{epoch}.csv", profile.bfs_hz),
                          (f"botdr/fit_quality_{epoch}.csv", profile.fit_quality)):
            write_position_series_csv(os.path.join(out, rel),
                                      PositionSeries(profile.position, vals,
                                                     "dimensionless"))
            artifacts.update([_artifact(out, rel)])
    if not found:
        raise ValidationError("no spectra stacks found; run `botdr simulate` first")
    return artifacts


def _load_profile(run: RunConfig, epoch) -> BfsProfile:
    bfs = read_position_series_csv(
        os.path.join(run.output_dir, f"botdr/bfs_{epoch}.csv"))
    quality = read_position_series_csv(
        os.path.join(run.output_dir, f"botdr/fit_quality_{epoch}.csv"))
    return BfsProfile(bfs.position, bfs.values, quality.values)


def botdr_diff_profiles(run: RunConfig):
    """Granular verb: strain difference from fitted profiles on disk."""
    cfg = run.botdr.botdr_config(run.scenario)
    delta = strain_difference(_load_profile(run, "before"),
                              _load_profile(run, "after"), cfg)
    rel = "botdr/delta_eps.csv"
    write_position_series_csv(os.path.join(run.output_dir, rel), delta)
    return dict([_artifact(run.output_dir, rel)])


def process_sop(run: RunConfig, window_s=None):
    out = run.output_dir
    _ensure_dirs(out, "sop")
    sc = run.scenario
    cfg = run.sop.sop_config(sc)
    grid, values = open_trace(os.path.join(out, "sop/trace.tr"))
    trace = SopTrace(grid, values[:, 0], values[:, 1])

    window_s = window_s or run.sop.window_s
    summary = stokes_rms(trace, window_s, noise_floor=3.0 * cfg.detector_noise_std)
    write_series_csv(os.path.join(out, "sop/s1norm.csv"), summary.series)
    write_series_csv(os.path.join(out, "sop/s0_rms.csv"),
                     Series(summary.series.time, summary.s0_rms, "dimensionless"))

    spec = sop_spectrogram(trace, run.sop.stft_window, 0.5)
    write_waterfall(os.path.join(out, "sop/spectrogram.wf"), spec)

    artifacts = {}
    for rel in ("sop/s1norm.csv", "sop/s0_rms.csv", "sop/spectrogram.wf"):
        artifacts.update([_artifact(out, rel)])
    return artifacts


_PROCESSORS = {"das": process_das, "botdr": process_botdr, "sop": process_sop}


# ------------------------------------------------------------------- plots


def _waterfall_csv(path, wf: Waterfall, col_name, value_name, max_col=None):
    """Long-format plot CSV: timestamp, column coordinate, value."""
    import csv

    coords = wf.axis.coords()
    keep = np.ones(len(coords), dtype=bool) if max_col is None else coords <= max_col
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["timestamp", col_name, value_name])
        vals = np.asarray(wf.values)
        for i in range(wf.time.count):
            ts = format_utc(wf.time.index_to_time(i))
            for j in np.nonzero(keep)[0]:
                w.writerow([ts, repr(float(coords[j])), repr(float(vals[i, j]))])


def write_plot_panels(run: RunConfig):
    """Fig. 2a-d / Fig. 3a-b analogue CSVs plus a small manifest."""
    out = run.output_dir
    _ensure_dirs(out, "plots")
    panels = []
    artifacts = {}

    def panel(name, rel, desc):
        panels.append({"name": name, "path": rel, "description": desc})
        artifacts.update([_artifact(out, rel)])

    std_path = os.path.join(out, "das/std.wf")
    if os.path.exists(std_path):
        std = read_waterfall(std_path)
        wind = fuse_wind(run.scenario.wind, std.time)
        write_series_csv(os.path.join(out, "plots/fig2a_wind.csv"), wind)
        panel("fig2a_wind", "plots/fig2a_wind.csv", "fused wind speed, m/s")
        _waterfall_csv(os.path.join(out, "plots/fig2b_das_std.csv"), std,
                       "position_m", "std_ne")
        panel("fig2b_das_std", "plots/fig2b_das_std.csv",
              "downsampled DAS strain std, nanostrain")
        spec_rel = f"das/spectrogram_{run.das.spectrogram_positions_m[0]:g}m.wf"
        if os.path.exists(os.path.join(out, spec_rel)):
            spec = read_waterfall(os.path.join(out, spec_rel))
            _waterfall_csv(os.path.join(out, "plots/fig3b_das_spectrogram.csv"),
                           spec, "freq_hz", "db", max_col=10.0)
            panel("fig3b_das_spectrogram", "plots/fig3b_das_spectrogram.csv",
                  "DAS strain spectrogram (<= 10 Hz), dB")

    de_path = os.path.join(out, "botdr/delta_eps.csv")
    if os.path.exists(de_path):
        import shutil

        shutil.copyfile(de_path, os.path.join(out, "plots/fig2c_delta_eps.csv"))
        panel("fig2c_delta_eps", "plots/fig2c_delta_eps.csv",
              "BFS-derived static strain change, microstrain")

    s1_path = os.path.join(out, "sop/s1norm.csv")
    if os.path.exists(s1_path):
        import shutil

        shutil.copyfile(s1_path, os.path.join(out, "plots/fig2d_sop_s1norm.csv"))
        panel("fig2d_sop_s1norm", "plots/fig2d_sop_s1norm.csv",
              "windowed S1/S0 from AC-coupled channels")
        spec_path = os.path.join(out, "sop/spectrogram.wf")
        if os.path.exists(spec_path):
            spec = read_waterfall(spec_path)
            _waterfall_csv(os.path.join(out, "plots/fig3a_sop_spectrogram.csv"),
                           spec, "freq_hz", "db", max_col=10.0)
            panel("fig3a_sop_spectrogram", "plots/fig3a_sop_spectrogram.csv",
                  "SOP spectrogram (<= 10 Hz), dB")

    import json

    rel = "plots/manifest.json"
    with open(os.path.join(out, rel), "w") as fh:
        json.dump({"schema": "plots1", "panels": panels}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    artifacts.update([_artifact(out, rel)])
    return artifacts


# ----------------------------------------------------------------- drivers


def run_simulate(run: RunConfig, only=None, jobs=1):
    names = [n for n in ("das", "botdr", "sop")
             if run.enabled(n) and (only is None or n in only)]
    if not names:
        raise ValidationError("no modality enabled for simulate")
    os.makedirs(run.output_dir, exist_ok=True)
    artifacts = {}
    for result in _run_stages([(_SIMULATORS[n], (run,)) for n in names], jobs):
        artifacts.update(result)
    write_manifest(os.path.join(run.output_dir, "simulate.manifest.json"), artifacts)
    return artifacts


def run_process(run: RunConfig, only=None, jobs=1, block_t=None, block_x=None,
                window_s=None):
    names = [n for n in ("das", "botdr", "sop")
             if run.enabled(n) and (only is None or n in only)]
    if not names:
        raise ValidationError("no modality enabled for process")
    stages = []
    for n in names:
        if n == "das":
            stages.append((process_das, (run, block_t, block_x)))
        elif n == "sop":
            stages.append((process_sop, (run, window_s)))
        else:
            stages.append((_PROCESSORS[n], (run,)))
    artifacts = {}
    for result in _run_stages(stages, jobs):
        artifacts.update(result)
    artifacts.update(write_plot_panels(run))
    write_manifest(os.path.join(run.output_dir, "process.manifest.json"), artifacts)
    return artifacts


def _run_stages(stages, jobs):
    """Run (fn, args) stages serially or in a worker pool.

    Every stage is deterministic on its own, so results do not depend on
    the pool size.
    """
    if jobs and jobs > 1 and len(stages) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=min(jobs, len(stages))) as pool:
            futures = [pool.submit(fn, *args) for fn, args in stages]
            return [f.result() for f in futures]
    return [fn(*args) for fn, args in stages]


def _slice_tones(spec, window, band, prominence, position_m=None):
    """find_tones on an absolute-time slice of a spectrogram (or None).

    Each STFT frame spans a full window around its center timestamp, so the
    slice is trimmed by one window length on both sides: a frame straddling
    the boundary would otherwise leak tone energy into the wrong interval.
    """
    if window is None:
        return None
    margin = 2.0 * spec.time.dt_s  # frame hop is half a window
    lo = (window[0] - spec.time.t0).total_seconds() + margin
    hi = (window[1] - spec.time.t0).total_seconds() - margin
    hi = min(hi, spec.time.duration_s)
    lo = max(lo, 0.0)
    if hi <= lo:
        return []
    return find_tones(spec.slice_seconds(lo, hi), band, prominence,
                      position_m=position_m)


def run_report(run: RunConfig):
    """Assemble report.json / report.txt from processed artifacts."""
    out = run.output_dir
    sc = run.scenario
    rep = run.report

    das_std = None
    std_path = os.path.join(out, "das/std.wf")
    if os.path.exists(std_path):
        das_std = read_waterfall(std_path)

    delta = None
    resolution_m = None
    de_path = os.path.join(out, "botdr/delta_eps.csv")
    if os.path.exists(de_path):
        delta = read_position_series_csv(de_path, unit="ustrain")
        resolution_m = pulse_to_resolution(run.botdr.pulse_width_us * 1e-6)

    sop_summary = None
    s0_path = os.path.join(out, "sop/s0_rms.csv")
    if os.path.exists(s0_path):
        s0 = read_series_csv(s0_path)
        sop_summary = {"present": True}
        if sc.storm_window is not None:
            pre, storm = _window_means(s0, run.t0, sc.storm_window)
            if pre is not None:
                sop_summary["pre_storm_s0"] = pre
                sop_summary["storm_s0"] = storm
                sop_summary["storm_prestorm_ratio"] = (
                    storm / pre if pre > 0 else float("inf"))

    if das_std is None and delta is None and sop_summary is None:
        raise ValidationError("no processed modality found; run `process` first")

    wind = None
    correlation = None
    if das_std is not None:
        wind = fuse_wind(sc.wind, das_std.time)
        seg = rep.correlation_segment
        if seg is None:
            seg = _transition_span(sc, das_std)
        if seg is not None:
            try:
                correlation = correlate_wind_activity(wind, das_std, seg)
            except ValidationError:
                correlation = None  # degenerate window (constant wind/too short)

    # tone detections per modality, storm window vs pre-storm
    das_tones = {}
    sop_tones = {}
    if sc.storm_window is not None:
        pre_window = (run.t0, sc.storm_window[0])
        for name, window in (("storm", sc.storm_window), ("pre_storm", pre_window)):
            dets = []
            for pos_m in run.das.spectrogram_positions_m:
                rel = f"das/spectrogram_{pos_m:g}m.wf"
                if not os.path.exists(os.path.join(out, rel)):
                    continue
                spec = read_waterfall(os.path.join(out, rel))
                found = _slice_tones(spec, window, rep.band_hz,
                                     rep.prominence_db, position_m=pos_m)
                dets.extend(found or [])
            das_tones[name] = dets
            sop_rel = os.path.join(out, "sop/spectrogram.wf")
            if os.path.exists(sop_rel):
                spec = read_waterfall(sop_rel)
                sop_tones[name] = _slice_tones(spec, window, rep.band_hz,
                                               rep.prominence_db) or []

    report = build_report(
        wind=wind, das_std=das_std, delta_eps=delta, resolution_m=resolution_m,
        das_tones=das_tones, sop_tones=sop_tones, sop_summary=sop_summary,
        correlation=correlation, hot_threshold_ne=rep.hot_threshold_ne,
        peak_threshold_ue=rep.peak_threshold_ue,
    )
    with open(os.path.join(out, "report.json"), "w") as fh:
        fh.write(report.to_json())
    with open(os.path.join(out, "report.txt"), "w") as fh:
        fh.write(report.to_text())
    artifacts = dict([_artifact(out, "report.json"), _artifact(out, "report.txt")])
    write_manifest(os.path.join(out, "report.manifest.json"), artifacts)
    return report


def _window_means(series: Series, t0, storm_window):
    """(pre_storm_mean, storm_mean) of a series, or (None, None)."""
    start = (storm_window[0] - series.time.t0).total_seconds()
    stop = (storm_window[1] - series.time.t0).total_seconds()
    off = series.time.offsets_s()
    pre = off < start
    storm = (off >= start) & (off <= stop)
    if pre.sum() < 1 or storm.sum() < 1:
        return None, None
    return float(series.values[pre].mean()), float(series.values[storm].mean())


def _transition_span(scenario, das_std):
    lo_d = das_std.axis.coords()[0]
    hi_d = das_std.axis.coords()[-1]
    for seg in scenario.segments:
        if seg.kind == "transition" and seg.start_m < hi_d and seg.end_m > lo_d:
            return (max(seg.start_m, lo_d), min(seg.end_m, hi_d))
    return None
