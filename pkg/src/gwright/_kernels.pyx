# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: complex log Gamma and the Mellin-Barnes node sum.

Same algorithms as ``_kernels_py``; see there for the formulas.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport ceil, M_PI
from libc.complex cimport clog, cexp, conj, creal, cimag

cnp.import_array()

cdef double[9] STIRLING = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
]
cdef double HALF_LOG_2PI = 0.91893853320467274178
cdef double LOG_PI = 1.1447298858494001741
cdef double LOG_HALF = -0.69314718055994530942
cdef double CUTOFF = 12.0


cdef inline double complex _stirling(double complex z) nogil:
    cdef double complex zinv = 1.0 / z
    cdef double complex z2inv = zinv * zinv
    cdef double complex acc = 0.0
    cdef int k
    for k in range(8, -1, -1):
        acc = acc * z2inv + STIRLING[k]
    return (z - 0.5) * clog(z) - z + HALF_LOG_2PI + acc * zinv


cdef inline double complex _lg_right(double complex z) nogil:
    cdef double complex logs = 0.0
    cdef int n, k
    if creal(z) * creal(z) + cimag(z) * cimag(z) >= CUTOFF * CUTOFF:
        return _stirling(z)
    n = <int>ceil(CUTOFF - creal(z))
    for k in range(n):
        logs = logs + clog(z)
        z = z + 1.0
    return _stirling(z) - logs


cdef inline double complex _log_sin_pi(double complex z) nogil:
    cdef bint flip = cimag(z) < 0
    cdef double complex w = conj(z) if flip else z
    cdef double complex I = 1j
    cdef double complex e = cexp(2.0 * M_PI * I * w)
    cdef double complex val
    # log1p(-e) with |e| <= 1; plain clog is adequate away from the poles
    val = -I * M_PI * w + LOG_HALF + 0.5 * M_PI * I + clog(1.0 - e)
    return conj(val) if flip else val


cdef inline double complex _loggamma(double complex z) nogil:
    if creal(z) < 0.0:
        return LOG_PI - _log_sin_pi(z) - _lg_right(1.0 - z)
    return _lg_right(z)


def loggamma(z):
    """Complex log Gamma for a 1-d complex128 array."""
    cdef double complex[::1] zv = np.ascontiguousarray(z, dtype=np.complex128)
    cdef Py_ssize_t n = zv.shape[0], i
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] ov = out
    with nogil:
        for i in range(n):
            ov[i] = _loggamma(zv[i])
    return out


def mb_sum(logk, s, w, logz):
    """out[j] = sum_i w[i] * exp(logk[i] - s[i] * logz[j]) (complex logz)."""
    cdef double complex[::1] lk = np.ascontiguousarray(logk, dtype=np.complex128)
    cdef double complex[::1] sv = np.ascontiguousarray(s, dtype=np.complex128)
    cdef double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef double complex[::1] lz = np.ascontiguousarray(logz, dtype=np.complex128)
    cdef Py_ssize_t n = lk.shape[0], m = lz.shape[0], i, j
    out = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] ov = out
    cdef double complex acc
    with nogil:
        for j in range(m):
            acc = 0.0
            for i in range(n):
                acc = acc + wv[i] * cexp(lk[i] - sv[i] * lz[j])
            ov[j] = acc
    return out
