"""SOP monitoring parameters."""

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError


@dataclass(frozen=True)
class SopConfig:
    """Detection chain and birefringence-cascade parameters.

    The input polarization sits at 45 degrees to both beam-splitter axes
    (Poincare S2), so both photodiodes see signal in the unperturbed state.
    ``strain_to_retardance_rad_per_ne`` is a calibration artifact, not a
    published constant.
    """

    sample_rate_hz: float = 44100.0
    highpass_corner_hz: float = 2.0
    n_plates: int = 64
    strain_to_retardance_rad_per_ne: float = 0.0
    rotation_drift_rad_s: float = 0.0
    detector_noise_std: float = 0.0
    total_power: float = 1.0
    input_state: "tuple[float, float, float]" = (0.0, 1.0, 0.0)

    def __post_init__(self):
        if self.sample_rate_hz <= 0:
            raise ValidationError("sample_rate_hz must be positive")
        if not 0 < self.highpass_corner_hz < self.sample_rate_hz / 2:
            raise ValidationError("highpass corner must sit below Nyquist")
        if self.n_plates < 1:
            raise ValidationError("n_plates must be >= 1")
        if self.detector_noise_std < 0:
            raise ValidationError("detector_noise_std must be >= 0")
        if self.total_power <= 0:
            raise ValidationError("total_power must be positive")
        norm = float(np.linalg.norm(self.input_state))
        if not abs(norm - 1.0) < 1e-6:
            raise ValidationError("input_state must be a unit Poincare vector")
