"""Run configuration (YAML, schema ``run1``).

A run config points at a scenario, fixes the simulation grids and
processing parameters per modality, and names the output directory. The
config file is the single source of truth; CLI flags only override
scalars.
"""

import os
from dataclasses import dataclass, field, replace

import yaml

from ..core.grids import PositionGrid, TimeGrid, parse_utc
from ..das.config import DasConfig
from ..botdr.config import BotdrConfig
from ..errors import ValidationError
from ..scenario.config import load_scenario
from ..sop.config import SopConfig

SCHEMA = "run1"

#: Environment variable providing the default output root.
OUTPUT_ROOT_ENV = "FIBERSENSE_OUTPUT_ROOT"


@dataclass
class DasRun:
    start_m: float = 0.0
    span_m: float = 20000.0
    spacing_m: float = 10.0
    duration_s: float = 1800.0
    block_t: int = 6000
    block_x: int = 10
    spectrogram_positions_m: tuple = (1500.0, 13000.0)
    tone_freqs_hz: tuple = (2.2, 2.4)
    bandpower_window_s: float = 30.0
    stft_window: int = 4096
    instrument: dict = field(default_factory=dict)

    def position_grid(self):
        count = int(round(self.span_m / self.spacing_m)) + 1
        return PositionGrid(self.start_m, self.spacing_m, count)

    def time_grid(self, t0, prf_hz):
        return TimeGrid(t0, 1.0 / prf_hz, int(round(self.duration_s * prf_hz)))

    def das_config(self, scenario):
        return DasConfig(sample_spacing_m=self.spacing_m,
                         phase_noise_std_rad=scenario.das_phase_std_rad,
                         **self.instrument)


@dataclass
class BotdrRun:
    spacing_m: float = 10.0
    pulse_width_us: float = 2.5
    averages: int = 4000
    instrument: dict = field(default_factory=dict)

    def position_grid(self, cable_length_m):
        count = int(round(cable_length_m / self.spacing_m)) + 1
        return PositionGrid(0.0, self.spacing_m, count)

    def botdr_config(self, scenario):
        return BotdrConfig(pulse_width_us=self.pulse_width_us,
                           averages=self.averages,
                           single_shot_noise_std=scenario.botdr_single_shot_std,
                           **self.instrument)


@dataclass
class SopRun:
    duration_s: float = 1800.0
    driver_spacing_m: float = 250.0
    driver_prf_hz: float = 600.0
    window_s: float = 5.0
    stft_window: int = 4096
    strain_to_retardance_rad_per_ne: float = 0.08
    rotation_drift_rad_s: float = 0.001
    instrument: dict = field(default_factory=dict)

    def sop_config(self, scenario):
        return SopConfig(
            strain_to_retardance_rad_per_ne=self.strain_to_retardance_rad_per_ne,
            rotation_drift_rad_s=self.rotation_drift_rad_s,
            detector_noise_std=scenario.sop_detector_std,
            **self.instrument)

    def driver_grids(self, t0, cable_length_m):
        count = int(round(cable_length_m / self.driver_spacing_m)) + 1
        pos = PositionGrid(0.0, self.driver_spacing_m, count)
        time = TimeGrid(t0, 1.0 / self.driver_prf_hz,
                        int(round(self.duration_s * self.driver_prf_hz)) + 1)
        return pos, time

    def trace_grid(self, t0, sample_rate_hz):
        count = int(self.duration_s * sample_rate_hz) + 1
        return TimeGrid(t0, 1.0 / sample_rate_hz, count)


@dataclass
class ReportRun:
    band_hz: tuple = (1.5, 3.0)
    prominence_db: float = 6.0
    correlation_segment: "tuple | None" = None  # (lo_m, hi_m); None = transition
    hot_threshold_ne: float = 1.0
    peak_threshold_ue: float = 20.0


@dataclass
class RunConfig:
    scenario_path: str
    scenario: object
    t0: object
    output_dir: str
    seed: int
    modalities: dict
    das: DasRun
    botdr: BotdrRun
    sop: SopRun
    report: ReportRun

    def enabled(self, name):
        return bool(self.modalities.get(name, True))


def _tupled(d, key, default):
    v = d.get(key, default)
    return tuple(v) if isinstance(v, (list, tuple)) else v


def load_run_config(path, output_dir=None, seed=None, duration_s=None,
                    spacing_m=None) -> RunConfig:
    """Load and validate a run config; optional arguments override scalars."""
    with open(path) as fh:
        doc = yaml.safe_load(fh)
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise ValidationError(f"{path}: run config schema must be {SCHEMA!r}")
    base = os.path.dirname(os.path.abspath(path))

    try:
        scenario_path = os.path.join(base, doc["scenario"])
        t0 = parse_utc(doc["t0"])
    except KeyError as exc:
        raise ValidationError(f"{path}: run config missing field {exc}") from None
    if not os.path.exists(scenario_path):
        raise ValidationError(f"{path}: scenario file not found: {scenario_path}")
    scenario = load_scenario(scenario_path)

    out = output_dir or doc.get("output_dir") or "out"
    if not os.path.isabs(out):
        root = os.environ.get(OUTPUT_ROOT_ENV)
        out = os.path.join(root, out) if root else os.path.join(base, out)

    das_doc = dict(doc.get("das", {}))
    botdr_doc = dict(doc.get("botdr", {}))
    sop_doc = dict(doc.get("sop", {}))
    rep_doc = dict(doc.get("report", {}))

    das = DasRun(
        start_m=float(das_doc.get("start_m", 0.0)),
        span_m=float(das_doc.get("span_m", 20000.0)),
        spacing_m=float(das_doc.get("spacing_m", 10.0)),
        duration_s=float(das_doc.get("duration_s", 1800.0)),
        block_t=int(das_doc.get("block_t", 6000)),
        block_x=int(das_doc.get("block_x", 10)),
        spectrogram_positions_m=_tupled(das_doc, "spectrogram_positions_m", (1500.0, 13000.0)),
        tone_freqs_hz=_tupled(das_doc, "tone_freqs_hz", (2.2, 2.4)),
        bandpower_window_s=float(das_doc.get("bandpower_window_s", 30.0)),
        stft_window=int(das_doc.get("stft_window", 4096)),
        instrument=dict(das_doc.get("instrument", {})),
    )
    botdr = BotdrRun(
        spacing_m=float(botdr_doc.get("spacing_m", 10.0)),
        pulse_width_us=float(botdr_doc.get("pulse_width_us", 2.5)),
        averages=int(botdr_doc.get("averages", 4000)),
        instrument=dict(botdr_doc.get("instrument", {})),
    )
    sop = SopRun(
        duration_s=float(sop_doc.get("duration_s", 1800.0)),
        driver_spacing_m=float(sop_doc.get("driver_spacing_m", 250.0)),
        driver_prf_hz=float(sop_doc.get("driver_prf_hz", 600.0)),
        window_s=float(sop_doc.get("window_s", 5.0)),
        stft_window=int(sop_doc.get("stft_window", 4096)),
        strain_to_retardance_rad_per_ne=float(
            sop_doc.get("strain_to_retardance_rad_per_ne", 0.08)),
        rotation_drift_rad_s=float(sop_doc.get("rotation_drift_rad_s", 0.001)),
        instrument=dict(sop_doc.get("instrument", {})),
    )
    report = ReportRun(
        band_hz=_tupled(rep_doc, "band_hz", (1.5, 3.0)),
        prominence_db=float(rep_doc.get("prominence_db", 6.0)),
        correlation_segment=_tupled(rep_doc, "correlation_segment", None),
        hot_threshold_ne=float(rep_doc.get("hot_threshold_ne", 1.0)),
        peak_threshold_ue=float(rep_doc.get("peak_threshold_ue", 20.0)),
    )

    if duration_s is not None:
        das = replace(das, duration_s=float(duration_s))
        sop = replace(sop, duration_s=float(duration_s))
    if spacing_m is not None:
        das = replace(das, spacing_m=float(spacing_m))
        botdr = replace(botdr, spacing_m=float(spacing_m))

    modalities = {"das": True, "botdr": True, "sop": True}
    modalities.update({k: bool(v) for k, v in dict(doc.get("modalities", {})).items()})

    return RunConfig(
        scenario_path=scenario_path,
        scenario=scenario,
        t0=t0,
        output_dir=out,
        seed=int(seed if seed is not None else doc.get("seed", scenario.seed)),
        modalities=modalities,
        das=das,
        botdr=botdr,
        sop=sop,
        report=report,
    )
