"""Windowed (block) statistics over waterfalls.

``windowed_std`` is the in-memory operator; ``BlockStdAccumulator`` computes
the same quantity in a single streaming pass over time chunks, which is how
the full-scale pipelines run. Population (not sample) standard deviation
throughout: golden files depend on the convention.
"""

import numpy as np

from ..errors import ValidationError
from .series import Waterfall


def centered_moving_mean(a, window, axis=0):
    """Moving mean over ``window`` samples along ``axis``, truncated at the
    edges (window [i-(w-1)//2, i+w//2] clipped to the array)."""
    if window <= 1:
        return np.asarray(a, dtype=np.float64)
    a = np.moveaxis(np.asarray(a, dtype=np.float64), axis, 0)
    n = a.shape[0]
    cs = np.zeros((n + 1,) + a.shape[1:])
    np.cumsum(a, axis=0, out=cs[1:])
    i = np.arange(n)
    lo = np.maximum(i - (window - 1) // 2, 0)
    hi = np.minimum(i + window // 2, n - 1)
    out = (cs[hi + 1] - cs[lo]) / (hi - lo + 1).reshape((-1,) + (1,) * (a.ndim - 1))
    return np.moveaxis(out, 0, axis)


def windowed_std(w: Waterfall, block_t: int, block_x: int) -> Waterfall:
    """Block-decimate a waterfall to the per-block population std.

    Trailing samples that do not fill a block are dropped. Output axes are
    the block-center decimated grids.
    """
    if block_t < 1 or block_t > w.time.count:
        raise ValidationError(f"block_t {block_t} outside [1, {w.time.count}]")
    if block_x < 1 or block_x > w.axis.count:
        raise ValidationError(f"block_x {block_x} outside [1, {w.axis.count}]")
    n_bt = w.time.count // block_t
    n_bx = w.axis.count // block_x
    v = np.asarray(w.values[: n_bt * block_t, : n_bx * block_x], dtype=np.float64)
    v = v.reshape(n_bt, block_t, n_bx, block_x)
    out = v.std(axis=(1, 3))
    return Waterfall(w.time.decimate(block_t), w.axis.decimate(block_x), out, w.unit)


class BlockStdAccumulator:
    """Streaming per-block std over [time, position] chunks.

    Keeps per-(time-block, position) first and second moments, so the
    finalize step can compute either the plain block std (exactly
    ``windowed_std``) or the block std after removing each position's
    whole-record mean (``demean=True``, the DAS processing convention that
    makes the result invariant to per-position phase offsets).
    """

    def __init__(self, n_time, n_pos, block_t, block_x):
        if block_t < 1 or block_t > n_time:
            raise ValidationError(f"block_t {block_t} outside [1, {n_time}]")
        if block_x < 1 or block_x > n_pos:
            raise ValidationError(f"block_x {block_x} outside [1, {n_pos}]")
        self.n_time, self.n_pos = n_time, n_pos
        self.block_t, self.block_x = block_t, block_x
        self.n_bt = n_time // block_t
        self.n_bx = n_pos // block_x
        self._sum = np.zeros((self.n_bt, n_pos), dtype=np.float64)
        self._sumsq = np.zeros((self.n_bt, n_pos), dtype=np.float64)
        self._next_row = 0

    def update(self, chunk):
        """Feed the next time chunk (rows must arrive in order)."""
        chunk = np.asarray(chunk)
        t0 = self._next_row
        self._next_row += chunk.shape[0]
        lim = self.n_bt * self.block_t
        for bt in range(t0 // self.block_t, min((self._next_row - 1) // self.block_t + 1, self.n_bt)):
            lo = max(bt * self.block_t, t0) - t0
            hi = min((bt + 1) * self.block_t, self._next_row, lim) - t0
            if hi <= lo:
                continue
            part = chunk[lo:hi].astype(np.float64)
            self._sum[bt] += part.sum(axis=0)
            self._sumsq[bt] += (part * part).sum(axis=0)

    def finalize(self, demean=False):
        """Per-block std matrix [n_bt, n_bx].

        With ``demean`` the per-position mean over all complete time blocks
        is subtracted before the block statistics are formed.
        """
        if self._next_row < self.n_bt * self.block_t:
            raise ValidationError("accumulator has not seen all complete blocks")
        nt = float(self.block_t)
        s = self._sum
        q = self._sumsq
        if demean:
            m = s.sum(axis=0) / (nt * self.n_bt)  # per-position record mean
            q = q - 2.0 * m[None, :] * s + nt * m[None, :] ** 2
            s = s - nt * m[None, :]
        n_bx, bx = self.n_bx, self.block_x
        sb = s[:, : n_bx * bx].reshape(self.n_bt, n_bx, bx).sum(axis=2)
        qb = q[:, : n_bx * bx].reshape(self.n_bt, n_bx, bx).sum(axis=2)
        n = nt * bx
        var = qb / n - (sb / n) ** 2
        return np.sqrt(np.maximum(var, 0.0))
