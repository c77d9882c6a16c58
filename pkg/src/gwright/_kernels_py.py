"""Pure numpy versions of the hot kernels.

These mirror ``_kernels.pyx`` operation for operation and are used whenever the
compiled extension is unavailable (or ``GWRIGHT_PURE_PYTHON=1``).
"""
import numpy as np

# B_{2k} / (2k (2k-1)), k = 1..9
STIRLING_COEFFS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
)
HALF_LOG_2PI = 0.91893853320467274178
LOG_PI = 1.1447298858494001741
LOG_HALF = -0.69314718055994530942
# |z| at which the asymptotic series is used directly
STIRLING_CUTOFF = 12.0


def _stirling(z):
    zinv = 1.0 / z
    z2inv = zinv * zinv
    acc = np.zeros_like(z)
    for c in reversed(STIRLING_COEFFS):
        acc = acc * z2inv + c
    return (z - 0.5) * np.log(z) - z + HALF_LOG_2PI + acc * zinv


def _loggamma_right(z):
    """log Gamma on Re z >= 0 by upward shifting and Stirling."""
    out = np.empty_like(z)
    small = np.abs(z) < STIRLING_CUTOFF
    big = ~small
    if big.any():
        out[big] = _stirling(z[big])
    if small.any():
        zs = z[small]
        nshift = np.ceil(STIRLING_CUTOFF - zs.real).astype(int)
        nmax = int(nshift.max())
        shifted = zs.copy()
        logs = np.zeros_like(zs)
        for k in range(nmax):
            active = k < nshift
            logs[active] += np.log(shifted[active])
            shifted[active] += 1.0
        out[small] = _stirling(shifted) - logs
    return out


def _log_sin_pi(z):
    """log sin(pi z) without overflow for large |Im z| (branch mod 2 pi i)."""
    flip = z.imag < 0
    w = np.where(flip, np.conj(z), z)
    # sin(pi w) = (i/2) e^{-i pi w} (1 - e^{2 i pi w}), |e^{2 i pi w}| <= 1
    val = -1j * np.pi * w + LOG_HALF + 0.5j * np.pi + np.log1p(-np.exp(2j * np.pi * w))
    return np.where(flip, np.conj(val), val)


def loggamma(z):
    """Complex log Gamma for a 1-d complex128 array."""
    z = np.ascontiguousarray(z, dtype=np.complex128)
    out = np.empty_like(z)
    left = z.real < 0.0
    right = ~left
    if right.any():
        out[right] = _loggamma_right(z[right])
    if left.any():
        zl = z[left]
        out[left] = LOG_PI - _log_sin_pi(zl) - _loggamma_right(1.0 - zl)
    return out


def mb_sum(logk, s, w, logz, chunk=256):
    """out[j] = sum_i w[i] * exp(logk[i] - s[i] * logz[j]) (complex logz)."""
    logk = np.asarray(logk, dtype=np.complex128)
    s = np.asarray(s, dtype=np.complex128)
    w = np.asarray(w, dtype=np.float64)
    logz = np.asarray(logz, dtype=np.complex128)
    out = np.empty(logz.shape[0], dtype=np.complex128)
    for start in range(0, logz.shape[0], chunk):
        lz = logz[start:start + chunk]
        e = np.exp(logk[None, :] - lz[:, None] * s[None, :])
        # elementwise + pairwise sum: fixed reduction order, no BLAS threading
        out[start:start + chunk] = (e * w[None, :]).sum(axis=1)
    return out
