"""BOTDR scan and conversion parameters."""

from dataclasses import dataclass

from ..errors import ValidationError


@dataclass(frozen=True)
class BotdrConfig:
    """Scan grid, averaging and line-shape constants.

    ``strain_coeff_mhz_per_ue`` and ``temp_coeff_mhz_per_k`` are the
    conventional silica sensitivities; the linewidth default is a standard
    SBS value. All three are config-exposed because fibers differ.
    """

    scan_start_hz: float = 10.60e9
    scan_stop_hz: float = 10.67e9
    scan_step_hz: float = 1e6
    pulse_width_us: float = 2.5
    averages: int = 4000
    linewidth_hz: float = 30e6
    strain_coeff_mhz_per_ue: float = 0.05
    temp_coeff_mhz_per_k: float = 1.0
    base_bfs_hz: float = 10.63e9
    single_shot_noise_std: float = 0.0
    group_index: float = 1.468

    def __post_init__(self):
        # a degenerate single-point scan (start == stop) is allowed; the
        # fit layer separately requires >= 5 points
        if not self.scan_start_hz <= self.scan_stop_hz:
            raise ValidationError("scan_start_hz must be <= scan_stop_hz")
        if not self.scan_step_hz > 0:
            raise ValidationError("scan_step_hz must be > 0")
        span = self.scan_stop_hz - self.scan_start_hz
        steps = span / self.scan_step_hz
        if abs(steps - round(steps)) > 1e-6:
            raise ValidationError(
                f"scan step {self.scan_step_hz} Hz does not divide span {span} Hz"
            )
        if not 0.5 <= self.pulse_width_us <= 16.0:
            raise ValidationError(
                f"pulse width {self.pulse_width_us} us outside [0.5, 16] us"
            )
        if self.averages < 1:
            raise ValidationError("averages must be >= 1")
        if not self.linewidth_hz > 0:
            raise ValidationError("linewidth_hz must be > 0")
        if self.single_shot_noise_std < 0:
            raise ValidationError("single_shot_noise_std must be >= 0")

    @property
    def scan_points(self):
        return int(round((self.scan_stop_hz - self.scan_start_hz) / self.scan_step_hz)) + 1
