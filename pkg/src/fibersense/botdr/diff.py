"""BFS difference between epochs -> static strain change."""

import numpy as np

from ..core.series import PositionSeries
from ..errors import ValidationError
from .config import BotdrConfig
from .fit import BfsProfile


def strain_difference(before: BfsProfile, after: BfsProfile,
                      cfg: BotdrConfig) -> PositionSeries:
    """Static strain change between two epochs, in microstrain.

    delta_eps(x) = (nu_after - nu_before) / C_eps, assuming the temperature
    channel is unchanged between epochs. Invalid fits propagate as NaN
    gaps.
    """
    if before.position != after.position:
        raise ValidationError("BFS profiles are on different position grids")
    delta_hz = after.bfs_hz - before.bfs_hz
    delta_ue = delta_hz / (cfg.strain_coeff_mhz_per_ue * 1e6)
    return PositionSeries(before.position, delta_ue, "ustrain")
