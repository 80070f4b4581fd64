"""Scenario config files (YAML, schema ``scenario1``).

The config is the one checked-in description of a scenario: segment table
with calibrated gains, wind CSV reference, forcing and noise parameters,
and the RNG seed.
"""

import os

import yaml

from ..core.grids import format_utc, parse_utc
from ..errors import ValidationError
from .model import CableSegment, Oscillation, Scenario
from .wind import ingest_wind

SCHEMA = "scenario1"


def _window_from(obj):
    if obj is None:
        return None
    if not (isinstance(obj, (list, tuple)) and len(obj) == 2):
        raise ValidationError(f"window must be [start, end] or null, got {obj!r}")
    return (parse_utc(obj[0]), parse_utc(obj[1]))


def scenario_from_dict(doc, base_dir="."):
    if doc.get("schema") != SCHEMA:
        raise ValidationError(
            f"scenario schema {doc.get('schema')!r} is not {SCHEMA!r}"
        )
    try:
        segments = []
        for sd in doc["segments"]:
            osc = sd.get("oscillation")
            oscillation = (
                Oscillation(
                    float(osc["freq_hz"]), float(osc["amplitude_ne"]),
                    _window_from(osc.get("window")),
                )
                if osc
                else None
            )
            segments.append(
                CableSegment(
                    float(sd["start_m"]), float(sd["end_m"]), sd["kind"],
                    float(sd.get("coupling", 0.0)), float(sd.get("static_gain", 0.0)),
                    oscillation,
                )
            )
        wind_csv = os.path.join(base_dir, doc["wind_csv"])
        if not os.path.exists(wind_csv):
            raise ValidationError(f"wind_csv file not found: {wind_csv}")
        noise = doc.get("noise", {})
        return Scenario(
            segments=segments,
            wind=ingest_wind(wind_csv),
            seed=int(doc["seed"]),
            calm_threshold_mps=float(doc.get("calm_threshold_mps", 3.0)),
            band_hz=tuple(float(v) for v in doc.get("band_hz", (0.05, 5.0))),
            correlation_length_m=float(doc.get("correlation_length_m", 500.0)),
            storm_window=_window_from(doc.get("storm_window")),
            das_phase_std_rad=float(noise.get("das_phase_std_rad", 0.0)),
            botdr_single_shot_std=float(noise.get("botdr_single_shot_std", 0.0)),
            sop_detector_std=float(noise.get("sop_detector_std", 0.0)),
        )
    except KeyError as exc:
        raise ValidationError(f"scenario config missing field {exc}") from None


def load_scenario(path) -> Scenario:
    with open(path) as fh:
        doc = yaml.safe_load(fh)
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: scenario config must be a mapping")
    return scenario_from_dict(doc, base_dir=os.path.dirname(os.path.abspath(path)))


def scenario_to_dict(sc: Scenario, wind_csv="wind.csv"):
    """Inverse of scenario_from_dict (wind data is referenced, not inlined)."""
    segs = []
    for s in sc.segments:
        sd = {"start_m": s.start_m, "end_m": s.end_m, "kind": s.kind,
              "coupling": s.coupling, "static_gain": s.static_gain}
        if s.oscillation is not None:
            o = s.oscillation
            sd["oscillation"] = {
                "freq_hz": o.freq_hz, "amplitude_ne": o.amplitude_ne,
                "window": None if o.window is None
                else [format_utc(o.window[0]), format_utc(o.window[1])],
            }
        segs.append(sd)
    return {
        "schema": SCHEMA,
        "seed": sc.seed,
        "wind_csv": wind_csv,
        "calm_threshold_mps": sc.calm_threshold_mps,
        "band_hz": list(sc.band_hz),
        "correlation_length_m": sc.correlation_length_m,
        "storm_window": None if sc.storm_window is None
        else [format_utc(sc.storm_window[0]), format_utc(sc.storm_window[1])],
        "noise": {
            "das_phase_std_rad": sc.das_phase_std_rad,
            "botdr_single_shot_std": sc.botdr_single_shot_std,
            "sop_detector_std": sc.sop_detector_std,
        },
        "segments": segs,
    }


def dump_scenario(path, sc: Scenario, wind_csv="wind.csv"):
    with open(path, "w") as fh:
        yaml.safe_dump(scenario_to_dict(sc, wind_csv), fh, sort_keys=False)
