"""Cable scenario: segments, wind forcing and strain-field synthesis."""

from .config import dump_scenario, load_scenario, scenario_from_dict, scenario_to_dict
from .model import CableSegment, Oscillation, Scenario, StrainField, WindRecord
from .synth import TILE_LEN, FieldSynthesizer, synthesize_field
from .wind import fuse_wind, ingest_wind, ingest_wind_text

__all__ = [
    "dump_scenario",
    "load_scenario",
    "scenario_from_dict",
    "scenario_to_dict",
    "CableSegment",
    "Oscillation",
    "Scenario",
    "StrainField",
    "WindRecord",
    "TILE_LEN",
    "FieldSynthesizer",
    "synthesize_field",
    "fuse_wind",
    "ingest_wind",
    "ingest_wind_text",
]
