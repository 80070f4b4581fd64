"""DAS forward model: strain field -> wrapped differential phase.

phi(x, t) = wrap(eps_gauge(x, t) / K + noise), where eps_gauge is the
strain moving-meaned over the gauge length and K is the strain-per-radian
constant. Noise is white Gaussian per frame and channel; slow laser drift
is not modeled (it would be removed by the per-position reference
subtraction in processing anyway).
"""

import numpy as np

from .._kernels import das_phase_tile
from ..core.rng import derive_rng
from ..core.series import Waterfall
from ..errors import ValidationError
from ..scenario.model import StrainField
from ..scenario.synth import TILE_LEN
from .config import DasConfig


class PhaseSimulator:
    """Tile-wise phase forward model with deterministic per-tile noise.

    Tiles must arrive at the fixed synthesis tile boundaries (multiples of
    TILE_LEN rows), which both the streaming and the in-memory paths use,
    so the two produce identical records for the same seed.
    """

    def __init__(self, cfg: DasConfig, spacing_m, n_pos, seed, cable_length_m=None):
        if cable_length_m is not None and cfg.gauge_length_m > cable_length_m:
            raise ValidationError(
                f"gauge length {cfg.gauge_length_m} m exceeds cable span "
                f"{cable_length_m} m"
            )
        self.cfg = cfg
        self.gauge = cfg.gauge_samples(spacing_m)
        if self.gauge > n_pos:
            raise ValidationError("gauge length exceeds the simulated span")
        self.inv_k = 1.0 / cfg.strain_per_radian
        self.seed = seed

    def tile(self, row_offset, strain_chunk):
        """Wrapped phase for one [tile, P] strain chunk (float32)."""
        if row_offset % TILE_LEN != 0:
            raise ValidationError("strain chunks must align with synthesis tiles")
        noise = None
        std = self.cfg.phase_noise_std_rad
        if std != 0.0:
            rng = derive_rng(self.seed, "das", "phase-noise", row_offset // TILE_LEN)
            noise = rng.standard_normal(strain_chunk.shape, dtype=np.float32)
        return das_phase_tile(strain_chunk, self.inv_k, self.gauge, noise, std)


def simulate_phase(field: StrainField, cfg: DasConfig, seed=0) -> Waterfall:
    """Forward-model a full in-memory strain field to a wrapped phase record."""
    sim = PhaseSimulator(cfg, field.position.spacing_m, field.position.count, seed,
                         cable_length_m=field.position.length_m + field.position.spacing_m)
    out = np.empty(field.dynamic.shape, dtype=np.float32)
    for lo in range(0, field.time.count, TILE_LEN):
        chunk = np.asarray(field.dynamic[lo : lo + TILE_LEN], dtype=np.float32)
        out[lo : lo + chunk.shape[0]] = sim.tile(lo, chunk)
    return Waterfall(field.time, field.position, out, "radian", validate=False)
