"""Cross-modal analysis: correlation, tone detection, report assembly."""

from .correlate import correlate_wind_activity, segment_mean_activity
from .report import CrossModalReport, build_report, delta_eps_peaks, hot_segments
from .tones import ToneDetection, find_tones, localize_tone

__all__ = [
    "correlate_wind_activity",
    "segment_mean_activity",
    "CrossModalReport",
    "build_report",
    "delta_eps_peaks",
    "hot_segments",
    "ToneDetection",
    "find_tones",
    "localize_tone",
]
