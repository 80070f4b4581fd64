"""DAS interrogator parameters."""

import math
from dataclasses import dataclass

from ..errors import ValidationError


@dataclass(frozen=True)
class DasConfig:
    """Interrogation and conversion constants.

    ``strain_phase_coeff`` (the photoelastic scaling) and ``group_index``
    are conventional silica values; both are exposed because instruments
    differ.
    """

    gauge_length_m: float = 40.0
    prf_hz: float = 600.0
    sample_spacing_m: float = 10.0
    pulse_width_ns: float = 500.0
    wavelength_nm: float = 1550.12
    group_index: float = 1.468
    strain_phase_coeff: float = 0.78
    phase_noise_std_rad: float = 0.0

    def __post_init__(self):
        for name in ("gauge_length_m", "prf_hz", "sample_spacing_m",
                     "pulse_width_ns", "wavelength_nm", "group_index",
                     "strain_phase_coeff"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive")
        if self.phase_noise_std_rad < 0:
            raise ValidationError("phase_noise_std_rad must be >= 0")
        if self.gauge_length_m < self.sample_spacing_m:
            raise ValidationError("gauge length must be >= sample spacing")

    @property
    def strain_per_radian(self):
        """Strain per radian of differential phase over one gauge length:
        lambda / (4 pi n xi L_g)."""
        lam = self.wavelength_nm * 1e-9
        return lam / (4.0 * math.pi * self.group_index
                      * self.strain_phase_coeff * self.gauge_length_m)

    def gauge_samples(self, spacing_m):
        """Moving-mean width approximating the gauge on a given grid."""
        return max(int(math.ceil(self.gauge_length_m / spacing_m)), 1)
