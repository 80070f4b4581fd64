"""Brillouin gain spectra: scan grid, spatial resolution, forward model."""

from dataclasses import dataclass

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from ..core.grids import FrequencyGrid, PositionGrid
from ..core.rng import derive_rng
from ..core.stats import centered_moving_mean
from ..errors import ValidationError
from ..scenario.model import StrainField
from .config import BotdrConfig

EPOCHS = ("before", "after")


def scan_grid(cfg: BotdrConfig):
    """Inclusive arithmetic frequency grid of the BFS scan, in Hz."""
    n = cfg.scan_points
    return cfg.scan_start_hz + cfg.scan_step_hz * np.arange(n)


def scan_frequency_grid(cfg: BotdrConfig) -> FrequencyGrid:
    return FrequencyGrid(cfg.scan_start_hz, cfg.scan_step_hz, cfg.scan_points)


def pulse_to_resolution(pulse_width_s, group_index=1.468):
    """Nominal spatial resolution of a probe pulse: c * tau / (2 n), meters."""
    if pulse_width_s <= 0 or group_index <= 0:
        raise ValidationError("pulse width and group index must be positive")
    return SPEED_OF_LIGHT * pulse_width_s / (2.0 * group_index)


@dataclass
class SpectrumStack:
    """Per-position Brillouin power spectra on the scan grid."""

    position: PositionGrid
    frequency: FrequencyGrid
    power: np.ndarray

    def __post_init__(self):
        self.power = np.asarray(self.power, dtype=np.float64)
        if self.power.shape != (self.position.count, self.frequency.count):
            raise ValidationError(
                f"power shape {self.power.shape} != "
                f"({self.position.count}, {self.frequency.count})"
            )
        if not np.all(np.isfinite(self.power)) or (self.power < 0).any():
            raise ValidationError("spectral power must be finite and >= 0")


def bfs_profile_hz(field: StrainField, epoch, cfg: BotdrConfig):
    """True Brillouin frequency per position for one measurement epoch."""
    if epoch not in EPOCHS:
        raise ValidationError(f"epoch must be one of {EPOCHS}, got {epoch!r}")
    eps = (field.static_profile_before if epoch == "before"
           else field.static_profile_after)
    return (cfg.base_bfs_hz
            + cfg.strain_coeff_mhz_per_ue * 1e6 * (eps * 1e6)
            + cfg.temp_coeff_mhz_per_k * 1e6 * field.temperature_delta)


def simulate_spectra(field: StrainField, epoch, cfg: BotdrConfig,
                     seed=0) -> SpectrumStack:
    """Forward-model averaged gain spectra for one epoch.

    Per position the spectrum is a unit-amplitude Lorentzian centered on
    the local BFS, spatially box-averaged over the pulse resolution, plus
    Gaussian noise of ``single_shot_noise_std / sqrt(averages)``. Negative
    noisy samples clip at zero (power is non-negative by construction). A
    BFS outside the scan range still produces a spectrum; flagging is the
    fit layer's job.
    """
    nu = scan_grid(cfg)
    nu_b = bfs_profile_hz(field, epoch, cfg)
    hwhm = cfg.linewidth_hz / 2.0
    spectra = hwhm**2 / ((nu[None, :] - nu_b[:, None]) ** 2 + hwhm**2)

    res_m = pulse_to_resolution(cfg.pulse_width_us * 1e-6, cfg.group_index)
    window = max(int(np.ceil(res_m / field.position.spacing_m)), 1)
    if window > 1:
        spectra = centered_moving_mean(spectra, window, axis=0)

    if cfg.single_shot_noise_std > 0:
        rng = derive_rng(seed, "botdr", epoch)
        spectra = spectra + rng.standard_normal(spectra.shape) * (
            cfg.single_shot_noise_std / np.sqrt(cfg.averages)
        )
        spectra = np.maximum(spectra, 0.0)

    return SpectrumStack(field.position, scan_frequency_grid(cfg), spectra)
