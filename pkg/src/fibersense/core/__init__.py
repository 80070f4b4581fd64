"""Shared grids, containers, statistics, spectra and RNG streams."""

from .grids import FrequencyGrid, PositionGrid, TimeGrid, format_utc, parse_utc
from .rng import derive_rng, seeded_rng
from .series import UNITS, PositionSeries, Series, Waterfall
from .spectral import DB_FLOOR, stft_spectrogram
from .stats import BlockStdAccumulator, windowed_std

__all__ = [
    "FrequencyGrid",
    "PositionGrid",
    "TimeGrid",
    "format_utc",
    "parse_utc",
    "derive_rng",
    "seeded_rng",
    "UNITS",
    "PositionSeries",
    "Series",
    "Waterfall",
    "DB_FLOOR",
    "stft_spectrogram",
    "BlockStdAccumulator",
    "windowed_std",
]
