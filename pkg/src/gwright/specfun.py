"""Foundation numerics: log Gamma, adaptive quadrature and normal sampling."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _backend
from .errors import ConvergenceError, DomainError

__all__ = [
    "QuadResult",
    "log_gamma",
    "log_gamma_real",
    "gamma_ratio_log",
    "integrate",
    "make_rng",
    "standard_normal",
]


def _is_pole(z):
    z = np.asarray(z)
    return (z.imag == 0) & (z.real <= 0) & (np.floor(z.real) == z.real)


def log_gamma(z):
    """Principal log Gamma of a complex scalar or array.

    The imaginary part is continuous on Re z >= 0 (it agrees with the usual
    ``loggamma`` there); for Re z < 0 the reflection formula is used and the
    imaginary part is only defined modulo 2 pi, which is irrelevant to every
    caller since they exponentiate sums of these values.

    Raises
    ------
    DomainError
        If ``z`` contains a non-positive integer.
    """
    arr = np.asarray(z, dtype=np.complex128)
    if _is_pole(arr).any():
        bad = arr[_is_pole(arr)].ravel()[0]
        raise DomainError(f"log_gamma: pole of Gamma at z = {bad.real:g}")
    out = _backend.loggamma(arr.ravel()).reshape(arr.shape)
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# extended precision real log Gamma (series coefficients, moments)

_LD = np.longdouble
_LD_PI = _LD("3.14159265358979323846264338327950288")
_LD_HALF_LOG_2PI = _LD("0.918938533204672741780329736405617640")
_B2K = [Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
        Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6),
        Fraction(-3617, 510), Fraction(43867, 798), Fraction(-174611, 330)]
_LD_STIRLING = [_LD(b.numerator) / _LD(b.denominator * (2 * k) * (2 * k - 1))
                for k, b in enumerate(_B2K, start=1)]
_LD_CUTOFF = 20


def _stirling_ld(x):
    xinv = _LD(1) / x
    x2 = xinv * xinv
    acc = np.zeros_like(x)
    for c in reversed(_LD_STIRLING):
        acc = acc * x2 + c
    return (x - _LD(0.5)) * np.log(x) - x + _LD_HALF_LOG_2PI + acc * xinv


def _lgamma_pos_ld(x):
    out = np.empty_like(x)
    small = x < _LD_CUTOFF
    if (~small).any():
        out[~small] = _stirling_ld(x[~small])
    if small.any():
        xs = x[small]
        n = np.ceil(_LD_CUTOFF - xs).astype(int)
        prod = np.ones_like(xs)
        shifted = xs.copy()
        for k in range(int(n.max())):
            act = k < n
            prod[act] *= shifted[act]
            shifted[act] += 1
        out[small] = _stirling_ld(shifted) - np.log(prod)
    return out


def log_gamma_real(x):
    """Extended-precision ``(log|Gamma(x)|, sign Gamma(x))`` for real ``x``.

    Works in ``numpy.longdouble``. Poles give ``(inf, 0)`` so callers can treat
    ``1/Gamma`` there as an exact zero.
    """
    x = np.atleast_1d(np.asarray(x, dtype=_LD))
    logabs = np.empty_like(x)
    sign = np.ones(x.shape, dtype=int)
    pole = (x <= 0) & (np.floor(x) == x)
    pos = x > 0
    neg = ~pos & ~pole
    if pos.any():
        logabs[pos] = _lgamma_pos_ld(x[pos])
    if neg.any():
        xn = x[neg]
        r = xn - 2 * np.floor(xn / 2)  # exact reduction to [0, 2)
        sinpi = np.sin(_LD_PI * r)
        logabs[neg] = np.log(_LD_PI / np.abs(sinpi)) - _lgamma_pos_ld(1 - xn)
        sign[neg] = np.where(sinpi > 0, 1, -1)
    logabs[pole] = np.inf
    sign[pole] = 0
    return logabs, sign


def gamma_ratio_log(num_args, den_args):
    """log of prod Gamma(num) / prod Gamma(den) for positive real arguments."""
    total = _LD(0)
    if len(num_args):
        la, sa = log_gamma_real(num_args)
        if (sa <= 0).any():
            raise DomainError("gamma_ratio_log: non-positive Gamma in numerator")
        total += la.sum()
    if len(den_args):
        lb, sb = log_gamma_real(den_args)
        if (sb <= 0).any():
            raise DomainError("gamma_ratio_log: non-positive Gamma in denominator")
        total -= lb.sum()
    return total


# ---------------------------------------------------------------------------
# quadrature

_GL_X, _GL_W = np.polynomial.legendre.leggauss(10)


@dataclass(frozen=True)
class QuadResult:
    value: object
    abs_error_estimate: object
    panels_used: int


def _mapped(f, a, b):
    """Return (g, lo, hi) with int_a^b f = int_lo^hi g."""
    if np.isfinite(a) and np.isfinite(b):
        return f, float(a), float(b)

    def jac(u):
        return 1.0 / (1.0 - u) ** 2

    if np.isfinite(a) and b == np.inf:
        def g(u):
            return _scale(f(a + u / (1.0 - u)), jac(u))
        return g, 0.0, 1.0
    if a == -np.inf and np.isfinite(b):
        def g(u):
            return _scale(f(b - u / (1.0 - u)), jac(u))
        return g, 0.0, 1.0
    if a == -np.inf and b == np.inf:
        def g(u):
            t = u / (1.0 - u)
            return _scale(np.asarray(f(t)) + np.asarray(f(-t)), jac(u))
        return g, 0.0, 1.0
    raise ValueError(f"integrate: unsupported domain ({a}, {b})")


def _scale(values, jac):
    values = np.asarray(values)
    return values * jac.reshape(jac.shape + (1,) * (values.ndim - 1))


def _gl(g, lo, hi):
    """Gauss-Legendre sums on many panels at once -> (npanels, ncomp)."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    vals = np.asarray(g(x))
    scalar = vals.ndim == 1
    vals = vals.reshape(lo.size, _GL_X.size, -1)
    return np.einsum("pnk,n->pk", vals, _GL_W) * half[:, None], scalar


def integrate(f, a=0.0, b=np.inf, rtol=1e-8, atol=0.0, *, max_panels=2 ** 14,
              initial_panels=16):
    """Adaptive composite Gauss-Legendre quadrature.

    ``f`` must be vectorized: it receives a 1-d array of abscissae and returns
    values of shape ``(n,)`` or ``(n, k)`` (vector-valued integrands are
    refined until every component meets its tolerance). Semi-infinite ranges
    use ``x = a + u/(1-u)``; the full line is folded onto ``[0, inf)``.

    Each panel is compared against the sum over its two halves; panels with
    the largest discrepancies are bisected until the summed discrepancy is
    below ``max(rtol*|value|, atol)``.

    Raises
    ------
    ConvergenceError
        When more than ``max_panels`` panels would be needed; the exception
        carries the best estimate.
    """
    if not 0 < rtol <= 1e-2:
        raise ValueError(f"integrate: rtol must lie in (0, 1e-2], got {rtol}")
    g, lo0, hi0 = _mapped(f, a, b)
    edges = np.linspace(lo0, hi0, initial_panels + 1)
    lo, hi = edges[:-1], edges[1:]
    mid = 0.5 * (lo + hi)
    both, scalar = _gl(g, np.concatenate([lo, lo, mid]),
                       np.concatenate([hi, mid, hi]))
    n = lo.size
    coarse, left, right = both[:n], both[n:2 * n], both[2 * n:]

    while True:
        fine = left + right
        delta = np.abs(fine - coarse)
        total = fine.sum(axis=0)
        tol = np.maximum(np.maximum(rtol * np.abs(total), atol), 1e-300)
        if np.all(delta.sum(axis=0) <= tol):
            break
        if lo.size >= max_panels:
            best = total[0] if scalar else total
            raise ConvergenceError(
                f"integrate: panel cap {max_panels} reached", best_estimate=best)
        score = (delta / tol).max(axis=1)
        order = np.argsort(score)[::-1]
        remaining = score.sum() - np.cumsum(score[order])
        nsplit = int(np.searchsorted(-remaining, -0.5)) + 1
        nsplit = min(nsplit, max_panels - lo.size) or 1
        split = order[:nsplit]
        keep = np.setdiff1d(np.arange(lo.size), split, assume_unique=True)

        slo, shi = lo[split], hi[split]
        smid = 0.5 * (slo + shi)
        q1, q3 = 0.5 * (slo + smid), 0.5 * (smid + shi)
        quarters, _ = _gl(g, np.concatenate([slo, q1, smid, q3]),
                       np.concatenate([q1, smid, q3, shi]))
        k = split.size
        lo = np.concatenate([lo[keep], slo, smid])
        hi = np.concatenate([hi[keep], smid, shi])
        coarse = np.concatenate([coarse[keep], left[split], right[split]])
        left = np.concatenate([left[keep], quarters[:k], quarters[2 * k:3 * k]])
        right = np.concatenate([right[keep], quarters[k:2 * k], quarters[3 * k:]])

    err = delta.sum(axis=0)
    if scalar:
        return QuadResult(total[0], float(err[0]), int(lo.size))
    return QuadResult(total, err, int(lo.size))


# ---------------------------------------------------------------------------
# random numbers

def make_rng(seed):
    """Counter-based generator (Philox) owned by the caller."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(seed))


def standard_normal(rng, d, size=None):
    """i.i.d. N(0,1) vector of length ``d`` (or ``size`` rows of them)."""
    if d < 1:
        raise ValueError("standard_normal: d must be >= 1")
    shape = (d,) if size is None else (size, d)
    return rng.standard_normal(shape)
