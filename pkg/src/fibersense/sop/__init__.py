"""State-of-polarization monitoring: cascade, detection, Stokes processing."""

from .config import SopConfig
from .detect import DETECT_TILE, Detector, SopTrace, detect, highpass_coefficients
from .process import StokesSummary, decimate_difference, sop_spectrogram, stokes_rms
from .propagate import (
    PlateCascade,
    StateSeries,
    build_cascade,
    propagate_polarization,
    retardance_matrix,
    span_mean_matrix,
)

__all__ = [
    "SopConfig",
    "DETECT_TILE",
    "Detector",
    "SopTrace",
    "detect",
    "highpass_coefficients",
    "StokesSummary",
    "decimate_difference",
    "sop_spectrogram",
    "stokes_rms",
    "PlateCascade",
    "StateSeries",
    "build_cascade",
    "propagate_polarization",
    "retardance_matrix",
    "span_mean_matrix",
]
