"""Polarization evolution through a lumped birefringent cascade.

The cable is approximated by ``n_plates`` retarder elements whose spans
subdivide the scenario segments (segment boundaries are always element
boundaries, so storm forcing maps onto specific elements). Element ``e``
rotates the Poincare vector about a fixed random axis by

    theta_e(t) = base_e + gain_e * <strain over span e>(t) [+ drift, e=0]

Only the end-of-fiber state is exposed: SOP monitoring integrates the
whole link without localization, and the module enforces that
structurally.
"""

from dataclasses import dataclass

import numpy as np

from .._kernels import cascade_states
from ..core.grids import PositionGrid, TimeGrid
from ..core.rng import derive_rng
from ..errors import ValidationError
from ..scenario.model import Scenario, StrainField
from .config import SopConfig


@dataclass(frozen=True)
class PlateCascade:
    """Element geometry and optics, fixed per (scenario seed, config)."""

    spans_m: np.ndarray          # (E, 2)
    axes: np.ndarray             # (E, 3) unit rotation axes
    base_rad: np.ndarray         # (E,) static retardance
    gain_rad_per_ne: np.ndarray  # (E,) strain modulation gain
    drift_axis: np.ndarray       # (3,) axis for the input rotation drift

    @property
    def n_plates(self):
        return len(self.base_rad)


def build_cascade(scenario: Scenario, cfg: SopConfig) -> PlateCascade:
    """Subdivide segments into n_plates spans and draw the optics."""
    edges = [s.start_m for s in scenario.segments] + [scenario.length_m]
    spans = [(a, b) for a, b in zip(edges, edges[1:])]
    if cfg.n_plates < len(spans):
        raise ValidationError(
            f"n_plates={cfg.n_plates} is fewer than the {len(spans)} scenario segments"
        )
    while len(spans) < cfg.n_plates:
        i = max(range(len(spans)), key=lambda k: spans[k][1] - spans[k][0])
        a, b = spans[i]
        mid = (a + b) / 2.0
        spans[i : i + 1] = [(a, mid), (mid, b)]
    spans = np.array(sorted(spans))

    rng = derive_rng(scenario.seed, "sop", "plates")
    axes = rng.standard_normal((cfg.n_plates, 3))
    axes /= np.linalg.norm(axes, axis=1, keepdims=True)
    base = rng.uniform(0.0, 2.0 * np.pi, cfg.n_plates)
    drift_axis = rng.standard_normal(3)
    drift_axis /= np.linalg.norm(drift_axis)

    # weight sensitivity by span length so response per meter is uniform
    lengths = spans[:, 1] - spans[:, 0]
    gain = cfg.strain_to_retardance_rad_per_ne * lengths / lengths.mean()
    return PlateCascade(spans, axes, base, gain, drift_axis)


def span_mean_matrix(position: PositionGrid, spans_m) -> np.ndarray:
    """(P, E) matrix averaging grid positions into element spans."""
    coords = position.coords()
    mat = np.zeros((position.count, len(spans_m)))
    for e, (a, b) in enumerate(spans_m):
        inside = (coords >= a - 1e-9) & (coords < b - 1e-9) if b < spans_m[-1][1] \
            else (coords >= a - 1e-9) & (coords <= b + 1e-9)
        n = int(inside.sum())
        if n:
            mat[inside, e] = 1.0 / n
    return mat


def retardance_matrix(strain_ne, cascade: PlateCascade, cfg: SopConfig,
                      t_offsets_s) -> np.ndarray:
    """theta[t, e] (+ leading drift column when drift is configured)."""
    theta = cascade.base_rad[None, :] + strain_ne * cascade.gain_rad_per_ne[None, :]
    if cfg.rotation_drift_rad_s != 0.0:
        drift = (cfg.rotation_drift_rad_s * np.asarray(t_offsets_s))[:, None]
        theta = np.concatenate([drift, theta], axis=1)
    return theta


def _full_axes(cascade: PlateCascade, cfg: SopConfig):
    if cfg.rotation_drift_rad_s != 0.0:
        return np.vstack([cascade.drift_axis, cascade.axes])
    return cascade.axes


@dataclass
class StateSeries:
    """End-of-fiber Poincare states on a time grid."""

    time: TimeGrid
    states: np.ndarray  # (T, 3) float64

    def __post_init__(self):
        if self.states.shape != (self.time.count, 3):
            raise ValidationError("state series shape mismatch")

    @property
    def s1(self):
        return self.states[:, 0]


def propagate_polarization(field: StrainField, cfg: SopConfig,
                           cascade: PlateCascade) -> StateSeries:
    """End-of-fiber polarization state driven by an in-memory strain field.

    Element spans must lie inside the field's position grid. Output norm is
    preserved to float64 rounding (a few 1e-15 per sample).
    """
    if (cascade.spans_m[0, 0] < field.position.start_m - field.position.spacing_m
            or cascade.spans_m[-1, 1] > field.position.end_m + field.position.spacing_m):
        raise ValidationError("cascade spans exceed the strain field's position grid")
    mat = span_mean_matrix(field.position, cascade.spans_m)
    empty = mat.sum(axis=0) == 0
    if empty.any():
        raise ValidationError("some cascade elements cover no field positions")
    strain_ne = np.asarray(field.dynamic, dtype=np.float64) @ mat * 1e9
    theta = retardance_matrix(strain_ne, cascade, cfg, field.time.offsets_s())
    s0 = np.asarray(cfg.input_state, dtype=np.float64)
    s0 = s0 / np.linalg.norm(s0)
    states = cascade_states(theta, _full_axes(cascade, cfg), s0)
    return StateSeries(field.time, states)
