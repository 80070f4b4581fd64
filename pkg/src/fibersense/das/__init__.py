"""Distributed acoustic sensing: phase forward model and inversion."""

from .config import DasConfig
from .forward import PhaseSimulator, simulate_phase
from .process import (
    BandPowerMap,
    UnwrapScan,
    das_spectrogram,
    phase_to_strain,
    std_waterfall,
    strain_column,
    unwrap_time,
)

__all__ = [
    "DasConfig",
    "PhaseSimulator",
    "simulate_phase",
    "BandPowerMap",
    "UnwrapScan",
    "das_spectrogram",
    "phase_to_strain",
    "std_waterfall",
    "strain_column",
    "unwrap_time",
]
