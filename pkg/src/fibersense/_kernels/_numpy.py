"""Pure-numpy implementations of the hot kernels.

These are the fallback used when the compiled extension is unavailable
(see :mod:`fibersense._kernels`). Every function here has a signature-
compatible twin in ``_native.pyx``; the two may differ in the last ulp of
float arithmetic but are otherwise interchangeable.

Array orientation is [time, position] (row-major, time outermost)
throughout, matching the on-disk waterfall layout.
"""

import numpy as np

NAME = "numpy"

_TWO_PI = 2.0 * np.pi


def wrap_phase(x):
    """Wrap angles into (-pi, pi]; a value of exactly +/-pi maps to +pi."""
    return np.pi - np.mod(np.pi - np.asarray(x, dtype=np.float64), _TWO_PI)


def unwrap_tile(wrapped, prev_wrapped, prev_unwrapped):
    """Unwrap one [time, position] tile along time, continuing a running scan.

    Parameters
    ----------
    wrapped : float32 array [T, P]
        Wrapped phase chunk.
    prev_wrapped, prev_unwrapped : float64 arrays [P]
        Scan state from the previous tile; updated in place. For the first
        tile both must equal the first row of the record, which preserves
        the first sample.

    Returns
    -------
    float32 array [T, P] of unwrapped phase.
    """
    w = np.asarray(wrapped, dtype=np.float64)
    delta = np.empty_like(w)
    delta[0] = w[0] - prev_wrapped
    np.subtract(w[1:], w[:-1], out=delta[1:])
    delta = wrap_phase(delta)
    out = np.cumsum(delta, axis=0)
    out += prev_unwrapped
    prev_wrapped[:] = w[-1]
    prev_unwrapped[:] = out[-1]
    return out.astype(np.float32)


def synth_expand_tile(nodes, idx, w0, w1, scale, amp, tone_cols, tone_rows):
    """Expand coarse-lattice noise to the full position grid for one tile.

    out[t, p] = amp[t] * scale[p] * (w0[p]*nodes[t, idx[p]] + w1[p]*nodes[t, idx[p]+1])
                + sum_j tone_cols[t, j] * tone_rows[p, j]

    ``w0``/``w1`` carry both the linear-interpolation weights and the
    variance renormalisation; ``scale`` carries the coupling envelope and
    unit conversion. Returns float32 [T, P].
    """
    nodes = np.asarray(nodes, dtype=np.float64)
    blended = nodes[:, idx] * w0 + nodes[:, idx + 1] * w1
    out = blended * (np.asarray(amp, dtype=np.float64)[:, None] * scale[None, :])
    if tone_cols.size:
        out += np.asarray(tone_cols, dtype=np.float64) @ np.asarray(tone_rows, dtype=np.float64).T
    return out.astype(np.float32)


def gauge_window(p, count, gauge):
    """Inclusive [lo, hi] sample window for a centred moving mean of width
    ``gauge`` at position index ``p``, truncated at the grid edges."""
    lo = max(p - (gauge - 1) // 2, 0)
    hi = min(p + gauge // 2, count - 1)
    return lo, hi


def das_phase_tile(strain, inv_k, gauge, noise, noise_std):
    """Forward-model one tile of wrapped DAS phase.

    Moving-means ``strain`` over ``gauge`` samples along position (window
    truncated at the edges), scales by ``inv_k`` (radians per unit strain),
    adds ``noise * noise_std`` and wraps into (-pi, pi].

    ``noise`` may be None when ``noise_std`` is zero. Returns float32 [T, P].
    """
    s = np.asarray(strain, dtype=np.float64)
    n_pos = s.shape[1]
    if gauge > 1:
        cs = np.zeros((s.shape[0], n_pos + 1), dtype=np.float64)
        np.cumsum(s, axis=1, out=cs[:, 1:])
        pos = np.arange(n_pos)
        lo = np.maximum(pos - (gauge - 1) // 2, 0)
        hi = np.minimum(pos + gauge // 2, n_pos - 1)
        s = (cs[:, hi + 1] - cs[:, lo]) / (hi - lo + 1)
    phase = s * inv_k
    if noise_std != 0.0:
        phase += np.asarray(noise, dtype=np.float64) * noise_std
    return wrap_phase(phase).astype(np.float32)


def cascade_states(theta, axes, s_in):
    """Propagate a Poincare-sphere state through a retarder cascade.

    Parameters
    ----------
    theta : float64 array [T, E]
        Rotation angle of element ``e`` at sample ``t``.
    axes : float64 array [E, 3]
        Unit rotation axis per element.
    s_in : float64 array [3]
        Input state, unit norm.

    Returns
    -------
    float64 array [T, 3] of output states (Rodrigues rotations applied in
    element order, all in float64 so the norm drifts by at most a few ulp).
    """
    theta = np.asarray(theta, dtype=np.float64)
    n_t, n_e = theta.shape
    s = np.broadcast_to(np.asarray(s_in, dtype=np.float64), (n_t, 3)).copy()
    for e in range(n_e):
        a = axes[e]
        c = np.cos(theta[:, e])
        sn = np.sin(theta[:, e])
        dot = s @ a
        cross = np.cross(np.broadcast_to(a, (n_t, 3)), s)
        s = s * c[:, None] + cross * sn[:, None] + a[None, :] * (dot * (1.0 - c))[:, None]
    return s


class BandPower:
    """Single-bin DFT power per position, accumulated over time chunks.

    The numpy path keeps a complex correlator per position; the native path
    runs the classic Goertzel second-order recurrence. Both yield
    ``|X(omega)|^2`` for the full accumulated window.
    """

    def __init__(self, omega, n_pos):
        self.omega = float(omega)
        self.n_pos = int(n_pos)
        self.n_samples = 0
        self._acc = np.zeros(n_pos, dtype=np.complex128)

    def update(self, chunk):
        chunk = np.asarray(chunk)
        n_t = chunk.shape[0]
        t = np.arange(self.n_samples, self.n_samples + n_t, dtype=np.float64)
        phasor = np.exp(-1j * self.omega * t)
        self._acc += phasor @ chunk.astype(np.float64)
        self.n_samples += n_t

    def power(self):
        """|X|^2 of the accumulated window, per position."""
        return np.abs(self._acc) ** 2
