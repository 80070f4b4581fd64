"""Ground-truth strain field synthesis.

Dynamic model: unit-variance Gaussian noise, band-limited to the forcing
band and spatially correlated over ``correlation_length_m``, scaled per
sample by ``coupling(x) * max(wind(t) - calm, 0)`` in nanostrain, plus any
segment oscillation tones. Static model: per-segment offsets of
``static_gain * (peak wind exceedance)`` microstrain between the two
epochs.

Spatial correlation is produced by synthesizing the noise on a coarse node
lattice (half the correlation length) and interpolating to the output grid
with variance renormalisation; this is what makes gauge-length averaging a
small effect, and it keeps generation cost proportional to the lattice, not
the grid.

Generation streams over fixed 65536-frame tiles so arbitrarily long records
use bounded memory; the tile grid is part of the algorithm, which makes the
output independent of how consumers chunk it.
"""

import numpy as np
from scipy import signal

from .._kernels import synth_expand_tile
from ..core.grids import PositionGrid, TimeGrid
from ..core.rng import derive_rng
from ..errors import ValidationError
from .model import Scenario, StrainField
from .wind import fuse_wind

#: Frames per generation tile. Fixed: results must not depend on chunking.
TILE_LEN = 65536

#: In-memory synthesis guard (cells); larger grids must stream.
MAX_IN_MEMORY = 200_000_000


def _bandpass(band_hz, fs):
    """(sos, unit-variance scale) for the forcing band at sample rate fs.

    Returns (None, 0.0) when the grid is too slow to carry the band, in
    which case the dynamic field is identically zero (degenerate grids are
    used for static-only runs).
    """
    lo, hi = band_hz
    nyq = fs / 2.0
    if fs < 8.0 * lo or nyq <= lo * 1.5:
        return None, 0.0
    hi = min(hi, 0.45 * fs)
    sos = signal.butter(2, [lo, hi], btype="band", fs=fs, output="sos")
    # white unit-variance input -> output variance is the mean squared
    # magnitude response over [0, nyquist]
    freqs = np.linspace(0.0, nyq, 4097)
    _, h = signal.sosfreqz(sos, worN=freqs, fs=fs)
    gain2 = np.trapezoid(np.abs(h) ** 2, freqs) / nyq
    return sos, 1.0 / np.sqrt(gain2)


class FieldSynthesizer:
    """Streaming synthesizer for one (scenario, grid) pair.

    ``tag`` separates the noise realizations of independent fibers in the
    same cable (e.g. the DAS fiber vs. the SOP fiber).
    """

    def __init__(self, scenario: Scenario, position: PositionGrid, time: TimeGrid,
                 tag="field"):
        self.scenario = scenario
        self.position = position
        self.time = time
        self.tag = tag

        coords = position.coords()
        if coords[0] < -1e-6 or coords[-1] > scenario.length_m + 1e-6:
            raise ValidationError(
                f"position grid exceeds cable length {scenario.length_m} m"
            )
        self.wind = fuse_wind(scenario.wind, time)  # errors if outside wind span
        self.amp = np.maximum(self.wind.values - scenario.calm_threshold_mps, 0.0)

        # coarse noise lattice
        spacing = max(scenario.correlation_length_m / 2.0, position.spacing_m)
        start = coords[0] - spacing
        self.n_nodes = int(np.ceil((coords[-1] - start) / spacing)) + 2
        frac = (coords - start) / spacing
        idx = np.minimum(frac.astype(np.int64), self.n_nodes - 2)
        w = frac - idx
        inv = 1.0 / np.sqrt((1.0 - w) ** 2 + w**2)
        self._idx = idx
        self._w0 = (1.0 - w) * inv
        self._w1 = w * inv

        self.sos, self._noise_scale = _bandpass(scenario.band_hz, time.fs_hz)
        self._zi = (
            np.zeros((self.sos.shape[0], 2, self.n_nodes)) if self.sos is not None else None
        )
        self._next_tile = 0

        # nanostrain -> strain happens in the per-position scale
        self.scale = scenario.coupling_profile(position) * 1e-9

        self._tones = scenario.tones(position)
        self._tone_rows = (
            np.stack([row * 1e-9 for _, row in self._tones], axis=1)
            if self._tones
            else np.zeros((position.count, 0))
        )

    def _tone_cols(self, t_lo, n_t):
        if not self._tones:
            return np.zeros((n_t, 0))
        t = (t_lo + np.arange(n_t)) * self.time.dt_s
        cols = []
        for osc, _ in self._tones:
            col = np.sin(2.0 * np.pi * osc.freq_hz * t)
            if osc.window is not None:
                w0 = (osc.window[0] - self.time.t0).total_seconds()
                w1 = (osc.window[1] - self.time.t0).total_seconds()
                col = np.where((t >= w0) & (t <= w1), col, 0.0)
            cols.append(col)
        return np.stack(cols, axis=1)

    def tiles(self):
        """Yield (row_offset, strain_chunk float32 [tile, P]) in time order."""
        if self._next_tile != 0:
            raise ValidationError("tiles() already consumed; build a new synthesizer")
        n_t = self.time.count
        for lo in range(0, n_t, TILE_LEN):
            hi = min(lo + TILE_LEN, n_t)
            tile = hi - lo
            if self.sos is not None:
                rng = derive_rng(self.scenario.seed, self.tag, "tiles", lo // TILE_LEN)
                white = rng.standard_normal((tile, self.n_nodes))
                nodes, self._zi = signal.sosfilt(self.sos, white, axis=0, zi=self._zi)
                nodes *= self._noise_scale
            else:
                nodes = np.zeros((tile, self.n_nodes))
            chunk = synth_expand_tile(
                nodes, self._idx, self._w0, self._w1, self.scale,
                self.amp[lo:hi], self._tone_cols(lo, tile), self._tone_rows,
            )
            self._next_tile += 1
            yield lo, chunk

    def static_profiles(self):
        """(before, after) static strain vectors, plain strain units."""
        exceed = max(self.scenario.peak_wind_mps() - self.scenario.calm_threshold_mps, 0.0)
        before = np.zeros(self.position.count)
        after = before + self.scenario.static_gain_profile(self.position) * exceed * 1e-6
        return before, after


def synthesize_field(scenario: Scenario, position: PositionGrid, time: TimeGrid,
                     tag="field") -> StrainField:
    """Materialize the full strain field in memory.

    Bit-identical to streaming the same grids through FieldSynthesizer;
    refuses grids above MAX_IN_MEMORY cells.
    """
    if time.count * position.count > MAX_IN_MEMORY:
        raise ValidationError(
            "grid too large for in-memory synthesis; stream via FieldSynthesizer"
        )
    synth = FieldSynthesizer(scenario, position, time, tag=tag)
    dynamic = np.empty((time.count, position.count), dtype=np.float32)
    for lo, chunk in synth.tiles():
        dynamic[lo : lo + chunk.shape[0]] = chunk
    before, after = synth.static_profiles()
    return StrainField(position, time, dynamic, before, after)
