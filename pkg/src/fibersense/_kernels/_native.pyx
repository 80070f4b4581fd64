# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the hot kernels.

Mirrors :mod:`fibersense._kernels._numpy` function for function; see there
for semantics. Arrays are [time, position], C-contiguous.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, fabs, fmod, sin

cnp.import_array()

NAME = "native"

cdef double PI = 3.141592653589793
cdef double TWO_PI = 6.283185307179586


cdef inline double _wrap(double x) nogil:
    # (-pi, pi], exact +/-pi maps to +pi; matches pi - mod(pi - x, 2pi)
    cdef double m = fmod(PI - x, TWO_PI)
    if m < 0.0:
        m += TWO_PI
    return PI - m


def wrap_phase(x):
    """Wrap angles into (-pi, pi]; a value of exactly +/-pi maps to +pi."""
    arr = np.ascontiguousarray(x, dtype=np.float64)
    flat = arr.reshape(-1)
    cdef const double[::1] v = flat
    cdef Py_ssize_t i, n = v.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _wrap(v[i])
    return out.reshape(arr.shape)


def unwrap_tile(wrapped, prev_wrapped, prev_unwrapped):
    """Unwrap a [T, P] tile along time, continuing a running scan state."""
    cdef const float[:, ::1] w = np.ascontiguousarray(wrapped, dtype=np.float32)
    cdef double[::1] pw = prev_wrapped
    cdef double[::1] pu = prev_unwrapped
    cdef Py_ssize_t n_t = w.shape[0], n_p = w.shape[1]
    out = np.empty((n_t, n_p), dtype=np.float32)
    cdef float[:, ::1] o = out
    cdef Py_ssize_t t, p
    cdef double u
    with nogil:
        for t in range(n_t):
            for p in range(n_p):
                u = pu[p] + _wrap(<double> w[t, p] - pw[p])
                o[t, p] = <float> u
                pu[p] = u
                pw[p] = <double> w[t, p]
    return out


def synth_expand_tile(nodes, idx, w0, w1, scale, amp, tone_cols, tone_rows):
    """Expand coarse-lattice noise to the full grid; see numpy twin."""
    cdef const double[:, ::1] nd = np.ascontiguousarray(nodes, dtype=np.float64)
    cdef const long[::1] ix = np.ascontiguousarray(idx, dtype=np.int64)
    cdef const double[::1] a0 = np.ascontiguousarray(w0, dtype=np.float64)
    cdef const double[::1] a1 = np.ascontiguousarray(w1, dtype=np.float64)
    cdef const double[::1] sc = np.ascontiguousarray(scale, dtype=np.float64)
    cdef const double[::1] am = np.ascontiguousarray(amp, dtype=np.float64)
    cdef const double[:, ::1] tc = np.ascontiguousarray(tone_cols, dtype=np.float64)
    cdef const double[:, ::1] tr = np.ascontiguousarray(tone_rows, dtype=np.float64)
    cdef Py_ssize_t n_t = nd.shape[0], n_p = ix.shape[0], n_j = tc.shape[1]
    out = np.empty((n_t, n_p), dtype=np.float32)
    cdef float[:, ::1] o = out
    cdef Py_ssize_t t, p, j
    cdef double v, at
    with nogil:
        for t in range(n_t):
            at = am[t]
            for p in range(n_p):
                v = at * sc[p] * (a0[p] * nd[t, ix[p]] + a1[p] * nd[t, ix[p] + 1])
                for j in range(n_j):
                    v += tc[t, j] * tr[p, j]
                o[t, p] = <float> v
    return out


def das_phase_tile(strain, double inv_k, Py_ssize_t gauge, noise, double noise_std):
    """Gauge moving mean + strain->phase scaling + noise + wrap for one tile."""
    cdef const float[:, ::1] s = np.ascontiguousarray(strain, dtype=np.float32)
    cdef Py_ssize_t n_t = s.shape[0], n_p = s.shape[1]
    cdef const float[:, ::1] nz
    cdef bint have_noise = noise_std != 0.0
    if have_noise:
        nz = np.ascontiguousarray(noise, dtype=np.float32)
    else:
        nz = np.empty((1, 1), dtype=np.float32)
    out = np.empty((n_t, n_p), dtype=np.float32)
    cdef float[:, ::1] o = out
    cs_buf = np.empty(n_p + 1, dtype=np.float64)
    cdef double[::1] cs = cs_buf
    cdef Py_ssize_t t, p, lo, hi
    cdef double v
    with nogil:
        for t in range(n_t):
            cs[0] = 0.0
            for p in range(n_p):
                cs[p + 1] = cs[p] + <double> s[t, p]
            for p in range(n_p):
                if gauge > 1:
                    lo = p - (gauge - 1) // 2
                    if lo < 0:
                        lo = 0
                    hi = p + gauge // 2
                    if hi > n_p - 1:
                        hi = n_p - 1
                    v = (cs[hi + 1] - cs[lo]) / <double> (hi - lo + 1)
                else:
                    v = <double> s[t, p]
                v = v * inv_k
                if have_noise:
                    v += <double> nz[t, p] * noise_std
                o[t, p] = <float> _wrap(v)
    return out


def cascade_states(theta, axes, s_in):
    """Rodrigues-rotate a unit state through a retarder cascade, per sample."""
    cdef const double[:, ::1] th = np.ascontiguousarray(theta, dtype=np.float64)
    cdef const double[:, ::1] ax = np.ascontiguousarray(axes, dtype=np.float64)
    cdef const double[::1] s0 = np.ascontiguousarray(s_in, dtype=np.float64)
    cdef Py_ssize_t n_t = th.shape[0], n_e = th.shape[1]
    out = np.empty((n_t, 3), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t t, e
    cdef double sx, sy, sz, axx, ayy, azz, c, sn, dot, cx, cy, cz, omc
    with nogil:
        for t in range(n_t):
            sx = s0[0]
            sy = s0[1]
            sz = s0[2]
            for e in range(n_e):
                axx = ax[e, 0]
                ayy = ax[e, 1]
                azz = ax[e, 2]
                c = cos(th[t, e])
                sn = sin(th[t, e])
                dot = axx * sx + ayy * sy + azz * sz
                cx = ayy * sz - azz * sy
                cy = azz * sx - axx * sz
                cz = axx * sy - ayy * sx
                omc = (1.0 - c) * dot
                sx = sx * c + cx * sn + axx * omc
                sy = sy * c + cy * sn + ayy * omc
                sz = sz * c + cz * sn + azz * omc
            o[t, 0] = sx
            o[t, 1] = sy
            o[t, 2] = sz
    return out


cdef class BandPower:
    """Goertzel recurrence per position, accumulated over time chunks."""

    cdef public double omega
    cdef public Py_ssize_t n_pos, n_samples
    cdef double coeff
    cdef double[::1] q1, q2

    def __init__(self, double omega, Py_ssize_t n_pos):
        self.omega = omega
        self.n_pos = n_pos
        self.n_samples = 0
        self.coeff = 2.0 * cos(omega)
        self.q1 = np.zeros(n_pos, dtype=np.float64)
        self.q2 = np.zeros(n_pos, dtype=np.float64)

    def update(self, chunk):
        cdef const float[:, ::1] x = np.ascontiguousarray(chunk, dtype=np.float32)
        cdef Py_ssize_t n_t = x.shape[0], n_p = x.shape[1]
        if n_p != self.n_pos:
            raise ValueError("chunk position count mismatch")
        cdef Py_ssize_t t, p
        cdef double s, c = self.coeff
        cdef double[::1] q1 = self.q1, q2 = self.q2
        with nogil:
            for t in range(n_t):
                for p in range(n_p):
                    s = <double> x[t, p] + c * q1[p] - q2[p]
                    q2[p] = q1[p]
                    q1[p] = s
        self.n_samples += n_t

    def power(self):
        """|X(omega)|^2 of the accumulated window, per position."""
        q1 = np.asarray(self.q1)
        q2 = np.asarray(self.q2)
        return q1 * q1 + q2 * q2 - self.coeff * q1 * q2
