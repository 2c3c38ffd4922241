"""Hot loops, each with a numba path and a pure-numpy path.

The public names at the bottom dispatch on :data:`wkbsum._accel.HAVE_NUMBA`.
Both paths are importable directly (``*_numba`` / ``*_numpy``) so tests and
the benchmark can compare them.
"""
import numpy as np

from ._accel import HAVE_NUMBA, njit

RESCALE = 1e100


# -- branch tracking -------------------------------------------------------

def _track_branch_py(w2, w0):
    n = w2.shape[0]
    w = np.empty(n, dtype=np.complex128)
    w[0] = w0
    worst = 0.0
    for k in range(1, n):
        r = np.sqrt(w2[k])
        prev = w[k - 1]
        if abs(r - prev) > abs(r + prev):
            r = -r
        w[k] = r
        if prev != 0 and r != 0:
            jump = abs(np.angle(r / prev))
            if jump > worst:
                worst = jump
    return w, worst


def track_branch_numpy(w2, w0):
    """Continuous square root of ``w2`` along a path starting at ``w0``.

    Returns the tracked values and the largest phase step between
    consecutive samples (the continuity certificate wants it < pi/2).
    """
    w2 = np.asarray(w2, dtype=np.complex128)
    phase = np.unwrap(np.angle(w2))
    w = np.sqrt(np.abs(w2)) * np.exp(0.5j * phase)
    if abs(w[0] - w0) > abs(w[0] + w0):
        w = -w
    w[0] = w0
    steps = np.abs(np.angle(w[1:] / w[:-1])) if w.size > 1 else np.zeros(0)
    return w, float(steps.max(initial=0.0))


# -- term sums -------------------------------------------------------------

def _ipow_py(z, p):
    # repeated squaring; general complex pow is far slower under numba
    if p < 0:
        z = 1.0 / z
        p = -p
    out = 1.0 + 0j
    while p:
        if p & 1:
            out *= z
        z *= z
        p >>= 1
    return out


_ipow = njit(_ipow_py)


def _sum_terms_py(coeff, cpow, spow, wpow, c, s, w):
    n = c.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    for j in range(n):
        cj = c[j]
        sj = s[j]
        wj = w[j]
        acc = 0j
        for t in range(coeff.shape[0]):
            v = coeff[t] * _ipow(cj, cpow[t]) * _ipow(wj, wpow[t])
            if spow[t] == 1:
                v = v * sj
            acc += v
        out[j] = acc
    return out


def sum_terms_numpy(coeff, cpow, spow, wpow, c, s, w):
    """sum_t coeff[t] * c**cpow[t] * s**spow[t] * w**wpow[t], pointwise."""
    c = np.asarray(c, dtype=np.complex128)
    s = np.asarray(s, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    if len(coeff) == 0:
        return np.zeros_like(c)
    block = (
        coeff[:, None]
        * c[None, :] ** cpow[:, None]
        * np.where(spow[:, None] == 1, s[None, :], 1.0)
        * w[None, :] ** wpow[:, None]
    )
    return block.sum(axis=0)


# -- Numerov ---------------------------------------------------------------

def _numerov_py(g, f0, f1, h):
    n = g.shape[0]
    f = np.empty(n, dtype=np.float64)
    f[0] = f0
    f[1] = f1
    k = h * h / 12.0
    for i in range(1, n - 1):
        f[i + 1] = (2.0 * (1.0 + 5.0 * k * g[i]) * f[i] - (1.0 - k * g[i - 1]) * f[i - 1]) / (
            1.0 - k * g[i + 1]
        )
        if abs(f[i + 1]) > RESCALE:
            for j in range(i + 2):
                f[j] = f[j] / RESCALE
    return f


def numerov_numpy(g, f0, f1, h):
    """Integrate F'' = g F on a uniform grid from two starting values."""
    return _numerov_py(np.asarray(g, dtype=np.float64), float(f0), float(f1), float(h))


if HAVE_NUMBA:
    track_branch_numba = njit(_track_branch_py)
    sum_terms_numba = njit(_sum_terms_py)
    numerov_numba = njit(_numerov_py)

    def track_branch(w2, w0):
        w, worst = track_branch_numba(np.ascontiguousarray(w2, dtype=np.complex128), complex(w0))
        return w, float(worst)

    def sum_terms(coeff, cpow, spow, wpow, c, s, w):
        return sum_terms_numba(
            np.ascontiguousarray(coeff, dtype=np.float64),
            np.ascontiguousarray(cpow, dtype=np.int64),
            np.ascontiguousarray(spow, dtype=np.int64),
            np.ascontiguousarray(wpow, dtype=np.int64),
            np.ascontiguousarray(c, dtype=np.complex128),
            np.ascontiguousarray(s, dtype=np.complex128),
            np.ascontiguousarray(w, dtype=np.complex128),
        )

    def numerov(g, f0, f1, h):
        return numerov_numba(np.ascontiguousarray(g, dtype=np.float64), float(f0), float(f1), float(h))

else:
    track_branch_numba = sum_terms_numba = numerov_numba = None
    track_branch = track_branch_numpy
    sum_terms = sum_terms_numpy
    numerov = numerov_numpy
