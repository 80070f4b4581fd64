"""Lorentzian BFS extraction: batched Levenberg-Marquardt over positions.

Model per position: g(nu) = A * (G/2)^2 / ((nu - c)^2 + (G/2)^2). The fit
is initialized at the coarse argmax and iterated at most 100 times; fits
that fail to converge fall back to a quadratic through the top 5 samples.
A center outside the scan range (or a flat spectrum) is flagged invalid
(NaN), never silently interpolated.
"""

from dataclasses import dataclass

import numpy as np

from ..core.grids import PositionGrid
from ..errors import ValidationError
from .config import BotdrConfig
from .spectra import SpectrumStack

MAX_ITER = 100


@dataclass
class BfsProfile:
    """Fitted Brillouin frequency vs. position.

    ``bfs_hz`` is NaN where the fit is invalid; ``fit_quality`` is the rms
    residual normalized by the fitted amplitude (NaN when invalid).
    """

    position: PositionGrid
    bfs_hz: np.ndarray
    fit_quality: np.ndarray

    def __post_init__(self):
        self.bfs_hz = np.asarray(self.bfs_hz, dtype=np.float64)
        self.fit_quality = np.asarray(self.fit_quality, dtype=np.float64)
        if self.bfs_hz.shape != (self.position.count,):
            raise ValidationError("bfs_hz length mismatch")
        if self.fit_quality.shape != (self.position.count,):
            raise ValidationError("fit_quality length mismatch")

    @property
    def valid(self):
        return np.isfinite(self.bfs_hz)


def _model_and_jacobian(nu, c, hw, amp):
    d = nu[None, :] - c[:, None]
    h = hw[:, None] ** 2
    denom = d * d + h
    g = amp[:, None] * h / denom
    dg_dc = amp[:, None] * h * 2.0 * d / (denom * denom)
    dg_dhw = 2.0 * amp[:, None] * hw[:, None] * d * d / (denom * denom)
    dg_da = h / denom
    return g, np.stack([dg_dc, dg_dhw, dg_da], axis=2)


def _quadratic_peak(nu, y, centers):
    """Vertex of a parabola through the 5 samples around each argmax."""
    n = len(nu)
    out = np.full(len(centers), np.nan)
    for i, k in enumerate(centers):
        lo = min(max(k - 2, 0), n - 5)
        x = nu[lo : lo + 5] - nu[k]
        coeffs = np.polyfit(x, y[i, lo : lo + 5], 2)
        if coeffs[0] < 0:
            out[i] = nu[k] - coeffs[1] / (2.0 * coeffs[0])
    return out


def fit_bfs(stack: SpectrumStack, cfg: BotdrConfig) -> BfsProfile:
    """Fit every position of a spectrum stack; see module docstring."""
    nu = stack.frequency.coords()
    if len(nu) < 5:
        raise ValidationError("need at least 5 frequency points to fit")
    y = stack.power
    n_pos = stack.position.count

    peak_idx = np.argmax(y, axis=1)
    amp = y[np.arange(n_pos), peak_idx].astype(np.float64)
    c = nu[peak_idx].astype(np.float64)
    hw = np.full(n_pos, cfg.linewidth_hz / 2.0)

    flat = (y.max(axis=1) - y.min(axis=1)) <= 1e-12 * max(float(y.max()), 1e-300)
    active = ~flat
    lam = np.full(n_pos, 1e-3)
    cost = np.full(n_pos, np.inf)
    g, _ = _model_and_jacobian(nu, c, hw, amp)
    cost[active] = ((g - y)[active] ** 2).sum(axis=1)
    converged = np.zeros(n_pos, dtype=bool)

    for _ in range(MAX_ITER):
        if not active.any():
            break
        ia = np.nonzero(active)[0]
        g, jac = _model_and_jacobian(nu, c[ia], hw[ia], amp[ia])
        r = g - y[ia]
        jtj = np.einsum("pfa,pfb->pab", jac, jac)
        jtr = np.einsum("pfa,pf->pa", jac, r)
        aug = jtj.copy()
        diag = np.maximum(np.diagonal(jtj, axis1=1, axis2=2), 1e-30)
        aug[:, np.arange(3), np.arange(3)] += lam[ia][:, None] * diag
        try:
            delta = np.linalg.solve(aug, -jtr[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            delta = -np.einsum("pab,pb->pa", np.linalg.pinv(aug), jtr)

        c_new = c[ia] + delta[:, 0]
        hw_new = np.abs(hw[ia] + delta[:, 1])
        amp_new = amp[ia] + delta[:, 2]
        g_new, _ = _model_and_jacobian(nu, c_new, hw_new, amp_new)
        cost_new = ((g_new - y[ia]) ** 2).sum(axis=1)

        better = cost_new < cost[ia]
        ib = ia[better]
        c[ib] = c_new[better]
        hw[ib] = hw_new[better]
        amp[ib] = amp_new[better]
        cost[ib] = cost_new[better]
        lam[ib] = np.maximum(lam[ib] / 3.0, 1e-12)
        lam[ia[~better]] *= 4.0

        done = np.zeros(len(ia), dtype=bool)
        done[better] = (np.abs(delta[better, 0]) < 10.0) & (np.abs(delta[better, 1]) < 10.0)
        converged[ia[done]] = True
        active[ia[done]] = False
        stuck = lam[ia] > 1e10
        active[ia[stuck]] = False

    # quadratic fallback for whatever never converged (and is not flat)
    fallback = ~converged & ~flat
    if fallback.any():
        c[fallback] = _quadratic_peak(nu, y[fallback], peak_idx[fallback])

    in_range = (c >= stack.frequency.start_hz) & (c <= stack.frequency.end_hz)
    valid = ~flat & np.isfinite(c) & in_range
    bfs = np.where(valid, c, np.nan)

    quality = np.full(n_pos, np.nan)
    iv = np.nonzero(valid)[0]
    if len(iv):
        g, _ = _model_and_jacobian(nu, c[iv], hw[iv], amp[iv])
        rms = np.sqrt(((g - y[iv]) ** 2).mean(axis=1))
        quality[iv] = rms / np.maximum(np.abs(amp[iv]), 1e-300)

    return BfsProfile(stack.position, bfs, quality)
