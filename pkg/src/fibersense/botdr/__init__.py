"""Brillouin reflectometry: spectra simulation, BFS fitting, strain diff."""

from .config import BotdrConfig
from .diff import strain_difference
from .fit import BfsProfile, fit_bfs
from .spectra import (
    EPOCHS,
    SpectrumStack,
    bfs_profile_hz,
    pulse_to_resolution,
    scan_frequency_grid,
    scan_grid,
    simulate_spectra,
)

__all__ = [
    "BotdrConfig",
    "strain_difference",
    "BfsProfile",
    "fit_bfs",
    "EPOCHS",
    "SpectrumStack",
    "bfs_profile_hz",
    "pulse_to_resolution",
    "scan_frequency_grid",
    "scan_grid",
    "simulate_spectra",
]
