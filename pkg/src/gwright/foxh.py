"""Fox H-function by Mellin-Barnes quadrature along a vertical line.

``H^{m,n}_{p,q}[z] = (1/2pi) int K(gamma + i t) z^{-gamma - i t} dt`` with

``K(s) = prod_{j<=m} Gamma(b_j + beta_j s) prod_{i<=n} Gamma(1 - a_i - alpha_i s)
       / prod_{i>n} Gamma(a_i + alpha_i s) / prod_{j>m} Gamma(1 - b_j - beta_j s)``.

The line ``Re s = gamma`` separates the left poles (from the ``b_j``,
``j <= m``) from the right poles (from the ``a_i``, ``i <= n``). Only the
decaying regime ``a* > 0`` is supported, where the integrand falls off like
``exp(-pi a* |t| / 2)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import (ConvergenceError, DomainError, ParameterError,
                     PrecisionWarning, UnsupportedRegimeError)

__all__ = ["FoxHParams", "FoxHResult", "kernel", "foxh_eval", "foxh_eval_sector",
           "gwf_via_foxh", "gwf_sector_halfwidth"]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
MAX_T = 2.0e4
MAX_NODES = 2 ** 20
# log of the saddle bound below which the value is taken as an exact 0
UNDERFLOW_LOG = -800.0


@dataclass(frozen=True)
class FoxHParams:
    """Orders ``m, n, p, q`` with ``p`` upper pairs ``(a_i, alpha_i)`` and ``q``
    lower pairs ``(b_j, beta_j)``. ``gamma=None`` selects the contour
    abscissa automatically."""

    m: int
    n: int
    p: int
    q: int
    upper: tuple
    lower: tuple
    gamma: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple((float(a), float(al)) for a, al in self.upper))
        object.__setattr__(self, "lower", tuple((float(b), float(be)) for b, be in self.lower))
        problems = []
        if len(self.upper) != self.p:
            problems.append(f"expected p = {self.p} upper pairs, got {len(self.upper)}")
        if len(self.lower) != self.q:
            problems.append(f"expected q = {self.q} lower pairs, got {len(self.lower)}")
        if not 0 <= self.m <= self.q:
            problems.append(f"need 0 <= m <= q, got m = {self.m}, q = {self.q}")
        if not 0 <= self.n <= self.p:
            problems.append(f"need 0 <= n <= p, got n = {self.n}, p = {self.p}")
        for name, seq in (("alpha", self.upper), ("beta", self.lower)):
            for i, (_, w) in enumerate(seq, start=1):
                if not w > 0:
                    problems.append(f"{name}_{i} = {w:g} must be > 0")
        if problems:
            raise ParameterError(problems)

    @property
    def a_star(self):
        al = [w for _, w in self.upper]
        be = [w for _, w in self.lower]
        return (math.fsum(be[:self.m]) + math.fsum(al[:self.n])
                - math.fsum(al[self.n:]) - math.fsum(be[self.m:]))

    def pole_interval(self):
        """Open interval (L, R) of admissible contour abscissae."""
        L = max((-b / be for b, be in self.lower[:self.m]), default=-math.inf)
        R = min(((1 - a) / al for a, al in self.upper[:self.n]), default=math.inf)
        return L, R

    def factors(self):
        """Gamma factors as ``(c, w, power)``: Gamma(c + w s)^power."""
        out = [(b, be, 1) for b, be in self.lower[:self.m]]
        out += [(1 - a, -al, 1) for a, al in self.upper[:self.n]]
        out += [(a, al, -1) for a, al in self.upper[self.n:]]
        out += [(1 - b, -be, -1) for b, be in self.lower[self.m:]]
        return out


@dataclass(frozen=True)
class FoxHResult:
    """Value plus contour diagnostics (arrays when evaluated on arrays)."""

    value: object
    imag_residual: object
    T: object
    n_nodes: object
    gamma: object
    tail_bound: object


def _log_kernel(factors, s):
    s = np.asarray(s, dtype=np.complex128)
    out = np.zeros(s.shape, dtype=np.complex128)
    for c, w, power in factors:
        arg = c + w * s
        if power > 0:
            pole = (arg.imag == 0) & (arg.real <= 0) & (np.floor(arg.real) == arg.real)
            if pole.any():
                raise DomainError(f"kernel: Gamma pole in numerator at s = "
                                  f"{complex(s[pole].ravel()[0])}")
            out += _backend.loggamma(arg.ravel()).reshape(s.shape)
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                lg = _backend.loggamma(arg.ravel()).reshape(s.shape)
            out -= np.where(np.isfinite(lg.real), lg, np.inf)
    return out


def kernel(params, s):
    """The Mellin kernel K(s) at complex ``s`` (scalar or array)."""
    arr = np.asarray(s, dtype=np.complex128)
    with np.errstate(over="ignore", invalid="ignore"):
        val = np.exp(_log_kernel(params.factors(), arr))
    val = np.where(np.isnan(val), 0, val)
    return val[()] if val.ndim == 0 else val


def _gamma_grid(L, R):
    if math.isinf(R):
        lo = L + 0.25 if math.isfinite(L) else -8.0
        return lo + np.concatenate([np.arange(0, 8, 0.25), np.geomspace(8, 512, 32)])
    if math.isinf(L):
        hi = R - 0.25
        return hi - np.concatenate([np.arange(0, 8, 0.25), np.geomspace(8, 512, 32)])[::-1]
    delta = min(0.25, (R - L) / 4)
    return np.linspace(L + delta, R - delta, 33)


def _choose_gamma(factors, L, R, logz):
    """Per-z abscissa minimizing |K(gamma)| z^-gamma over a candidate grid."""
    grid = _gamma_grid(L, R)
    with np.errstate(all="ignore"):
        phi = _log_kernel(factors, grid.astype(np.complex128)).real
    ok = np.isfinite(phi)
    grid, phi = grid[ok], phi[ok]
    if grid.size == 0:
        mid = 0.5 * (L + R) if math.isfinite(L + R) else (L + 1 if math.isfinite(L) else R - 1)
        return np.full(logz.shape, mid), np.zeros(logz.shape)
    obj = phi[None, :] - grid[None, :] * logz[:, None]
    best = np.argmin(obj, axis=1)
    return grid[best], obj[np.arange(logz.size), best]


def _admissible(gamma, L, R):
    if math.isfinite(L) and math.isfinite(R):
        margin = min(0.05, (R - L) / 20)
        if L + margin <= gamma <= R - margin:
            return gamma, False
        return 0.5 * (L + R), True
    if L < gamma < R:
        return gamma, False
    return (L + 0.5 if math.isfinite(L) else R - 0.5), True


class _Contour:
    """Panels on the line Re s = gamma, extended outward on demand."""

    def __init__(self, factors, gamma, L, R, lnz_max):
        self.factors = factors
        self.gamma = gamma
        self.dist0 = min(gamma - L, R - gamma)
        self.lnz_max = lnz_max
        self.shift = [(abs(c + w * gamma), abs(w)) for c, w, _ in factors]
        self.edge = 0.0

    def _width(self, t):
        omega = self.lnz_max + sum(w * math.log(2 + w * t + c) for c, w in self.shift)
        return min(math.hypot(self.dist0, t), math.pi / max(1.0, self.lnz_max),
                   6.0 / max(omega, 1e-3))

    def extend(self, T):
        edges = [self.edge]
        while edges[-1] < T:
            edges.append(edges[-1] + self._width(edges[-1]))
        self.edge = edges[-1]
        e = np.asarray(edges)
        mid, half = 0.5 * (e[1:] + e[:-1]), 0.5 * (e[1:] - e[:-1])
        t = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
        w = (half[:, None] * _GL_W[None, :]).ravel()
        t = np.concatenate([t, -t])
        w = np.concatenate([w, w])
        s = self.gamma + 1j * t
        return s, w, _log_kernel(self.factors, s)


def _tail(factors, gamma, T, logz, rate):
    """Bound on the neglected |t| > T part, per argument."""
    s = np.array([gamma + 1j * T, gamma - 1j * T])
    with np.errstate(all="ignore"):
        lk = _log_kernel(factors, s).real.max()
    growth = -gamma * logz.real + T * np.abs(logz.imag)
    return np.exp(lk + growth) * (2.0 / rate) / (2 * math.pi)


def _eval_line(factors, gamma, L, R, logz, rtol, a_star):
    """Contour sum on Re s = gamma for (complex) log-arguments ``logz``."""
    theta = float(np.abs(logz.imag).max())
    rate = math.pi * a_star / 2 - theta
    contour = _Contour(factors, gamma, L, R, float(np.abs(logz.real).max()))
    scale = max((abs(c + w * gamma) / abs(w) for c, w, _ in factors), default=0.0)
    T = math.log(10 / rtol) / rate + scale
    total = np.zeros(logz.size, dtype=np.complex128)
    size = np.abs if theta > 0 else (lambda v: np.abs(v.real))
    n_nodes = 0
    while True:
        s, w, lk = contour.extend(T)
        n_nodes += s.size
        with np.errstate(over="ignore", invalid="ignore"):
            part = _backend.mb_sum(lk, s, w, logz)
        total += part
        if not np.all(np.isfinite(total)):
            raise ConvergenceError("foxh: overflow on the contour")
        value = total / (2 * math.pi)
        tail = _tail(factors, gamma, contour.edge, logz, rate)
        if np.all((tail <= 0.1 * rtol * size(value)) | (tail < 1e-300)):
            return value, contour.edge, n_nodes, tail
        if contour.edge > MAX_T or n_nodes > MAX_NODES:
            raise ConvergenceError(
                f"foxh: contour truncation did not converge (T = {contour.edge:.3g})",
                best_estimate=value.real)
        # extend by the distance the integrand decay needs, at least 25%
        with np.errstate(divide="ignore"):
            ratio = np.max(tail / np.maximum(0.1 * rtol * size(value), 1e-300))
        step = math.log(max(ratio, 1.0)) / rate * 1.25
        T = contour.edge + max(step, 0.25 * contour.edge)


def _evaluate(params, logz, rtol, gamma):
    a_star = params.a_star
    if not a_star > 0:
        raise UnsupportedRegimeError(f"foxh: a* = {a_star:g} <= 0 is not supported")
    L, R = params.pole_interval()
    if not L < R:
        raise ParameterError([f"foxh: left poles (>= {L:g}) and right poles "
                              f"(<= {R:g}) are not separated"])
    factors = params.factors()
    g = gamma if gamma is not None else params.gamma
    if g is not None:
        g, moved = _admissible(float(g), L, R)
        if moved:
            warnings.warn(f"foxh: contour abscissa moved to {g:g}, inside ({L:g}, {R:g})",
                          PrecisionWarning, stacklevel=3)
        gammas = np.full(logz.shape, g)
        tiny = np.zeros(logz.shape, dtype=bool)
    else:
        gammas, bound = _choose_gamma(factors, L, R, logz.real)
        tiny = bound < UNDERFLOW_LOG

    value = np.zeros(logz.shape, dtype=np.complex128)
    Ts = np.zeros(logz.shape)
    nodes = np.zeros(logz.shape, dtype=int)
    tails = np.zeros(logz.shape)
    for gv in np.unique(gammas[~tiny]):
        idx = np.nonzero((gammas == gv) & ~tiny)[0]
        v, T, n, tail = _eval_line(factors, float(gv), L, R, logz[idx], rtol, a_star)
        value[idx], Ts[idx], nodes[idx], tails[idx] = v, T, n, tail
    return value, Ts, nodes, gammas, tails


def foxh_eval_sector(params, z, rtol=1e-10):
    """H-function at complex ``z`` with ``|arg z| < pi a*/2`` (same contour).

    The integrand then still decays, like ``exp(-(pi a*/2 - |arg z|) |t|)``.
    """
    arr = np.asarray(z, dtype=np.complex128)
    zz = np.atleast_1d(arr).ravel()
    if np.any(zz == 0) or not np.all(np.isfinite(zz)):
        raise DomainError("foxh: arguments must be finite and non-zero")
    logz = np.log(zz)
    if np.any(np.abs(logz.imag) >= math.pi * params.a_star / 2):
        raise DomainError(f"foxh: |arg z| must be < pi a*/2 = {math.pi * params.a_star / 2:.6g}")
    value = _evaluate(params, logz, rtol, None)[0].reshape(arr.shape)
    return value[()] if value.ndim == 0 else value


def foxh_eval(params, z, rtol=1e-10, gamma=None, diagnostics=False):
    """Evaluate H^{m,n}_{p,q} at positive real ``z`` (scalar or array).

    Parameters
    ----------
    params : FoxHParams
    z : float or array_like
        Positive arguments.
    rtol : float
        Target relative accuracy of each value.
    gamma : float, optional
        Contour abscissa; overrides ``params.gamma``. If it is inadmissible or
        too close to a pole it is moved to the middle of the pole gap (a
        :class:`PrecisionWarning` is issued). By default it is chosen per
        argument near the saddle of ``|K(gamma)| z^-gamma``; arguments sharing
        an abscissa share the kernel evaluations.
    diagnostics : bool
        Return a :class:`FoxHResult` instead of the bare value.

    Raises
    ------
    UnsupportedRegimeError
        If ``a* <= 0``.
    DomainError
        If some ``z <= 0``.
    ConvergenceError
        If the contour truncation fails to converge.
    """
    arr = np.asarray(z, dtype=float)
    zz = np.atleast_1d(arr).ravel()
    if np.any(~(zz > 0)) or np.any(~np.isfinite(zz)):
        raise DomainError("foxh: arguments must be finite and > 0")
    value, Ts, nodes, gammas, tails = _evaluate(params, np.log(zz).astype(np.complex128),
                                                rtol, gamma)

    shape = arr.shape

    def out(x):
        x = x.reshape(shape)
        return x[()] if x.ndim == 0 else x

    if not diagnostics:
        return out(value.real)
    return FoxHResult(value=out(value.real), imag_residual=out(value.imag), T=out(Ts),
                      n_nodes=out(nodes), gamma=out(gammas), tail_bound=out(tails))


def _gwf_params(upper_pairs, lower_pairs):
    for B, _ in upper_pairs:
        if not B > 0:
            raise UnsupportedRegimeError("gwf_via_foxh: needs all numerator shifts > 0")
    upper = tuple((1.0 - B, be) for B, be in upper_pairs)
    lower = ((0.0, 1.0),) + tuple((1.0 - A, al) for A, al in lower_pairs)
    return FoxHParams(m=1, n=len(upper), p=len(upper), q=len(lower), upper=upper, lower=lower)


def gwf_via_foxh(upper_pairs, lower_pairs, x, rtol=1e-12):
    """Psi(-x) for a gWf with Gamma-numerator pairs ``(B_i, beta_i)`` and
    Gamma-denominator pairs ``(A_j, alpha_j)``, by contour quadrature.

    Uses ``Psi(-x) = H^{1,m}_{m,p+1}[x | (1-B_i, beta_i); (0,1), (1-A_j, alpha_j)]``,
    valid when every ``B_i > 0`` and ``a* = 1 + sum beta_i - sum alpha_j > 0``.
    ``x`` is real and >= 0; complex ``x`` with ``|arg x| < pi a*/2`` is also
    accepted (complex result).
    """
    params = _gwf_params(upper_pairs, lower_pairs)
    x = np.asarray(x)
    cplx = np.iscomplexobj(x)
    x = x.astype(np.complex128 if cplx else float)
    zero = x == 0
    out = np.empty(x.shape, dtype=x.dtype)
    if np.any(zero):
        from .specfun import gamma_ratio_log
        out[zero] = math.exp(gamma_ratio_log([B for B, _ in upper_pairs],
                                             [A for A, _ in lower_pairs]))
    if np.any(~zero):
        evaluate = foxh_eval_sector if cplx else foxh_eval
        out[~zero] = evaluate(params, x[~zero], rtol=rtol)
    return out[()] if out.ndim == 0 else out


def gwf_sector_halfwidth(upper_pairs, lower_pairs):
    """Half opening angle ``pi a*/2`` of the sector where :func:`gwf_via_foxh` applies."""
    return math.pi * _gwf_params(upper_pairs, lower_pairs).a_star / 2
