"""Measure-family parameters and generalized Wright function series.

A family is given by the Fox-H density parameters ``upper = (a_i, alpha_i)``
(i = 1..p) and ``lower = (b_j, beta_j)`` (j = 1..m). Its Laplace transform is
the generalized Wright function with shifted parameters
``(b_j + beta_j, beta_j)`` over ``(a_i + alpha_i, alpha_i)``.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import (ConvergenceError, DomainError, ParameterError,
                     PrecisionWarning, UnsupportedRegimeError)
from .specfun import gamma_ratio_log, log_gamma_real

__all__ = [
    "WrightParams",
    "ValidatedFamily",
    "validate",
    "gwf",
    "series_terms",
    "family_psi",
    "psi_eval",
]

_LD = np.longdouble
_LD_EPS = float(np.finfo(_LD).eps)
MAX_TERMS = 10_000
MIN_TERMS = 8
CANCELLATION_LIMIT = 1e8


def _pairs(seq, name):
    out = []
    for idx, pair in enumerate(seq):
        if len(pair) != 2:
            raise ParameterError([f"{name}[{idx}]: expected a pair [value, weight]"])
        out.append((float(pair[0]), float(pair[1])))
    return tuple(out)


@dataclass(frozen=True)
class WrightParams:
    """Raw family parameters; nothing is checked until :func:`validate`."""

    upper: tuple = ()
    lower: tuple = ()
    allow_white_noise: bool = False

    def __post_init__(self):
        object.__setattr__(self, "upper", _pairs(self.upper, "upper"))
        object.__setattr__(self, "lower", _pairs(self.lower, "lower"))

    @property
    def p(self):
        return len(self.upper)

    @property
    def m(self):
        return len(self.lower)

    @classmethod
    def mittag_leffler(cls, rho):
        return cls(upper=((1.0 - rho, rho),), lower=((0.0, 1.0),))

    @classmethod
    def gaussian(cls):
        return cls(allow_white_noise=True)

    @classmethod
    def from_mapping(cls, data, source="<mapping>"):
        """Build from a parsed parameter document, naming the offending field."""
        problems = []
        if not isinstance(data, dict):
            raise ParameterError([f"{source}: top level must be an object"])
        for key in data:
            if key not in ("upper", "lower", "allow_white_noise", "name", "comment"):
                problems.append(f"{source}: unknown field '{key}'")
        lists = {}
        for key in ("upper", "lower"):
            raw = data.get(key, [])
            if not isinstance(raw, list):
                problems.append(f"{source}: field '{key}' must be a list of pairs")
                continue
            pairs = []
            for idx, item in enumerate(raw):
                ok = (isinstance(item, list) and len(item) == 2
                      and all(isinstance(v, (int, float)) and not isinstance(v, bool)
                              for v in item))
                if not ok:
                    problems.append(f"{source}: field '{key}[{idx}]' must be [number, number]")
                else:
                    pairs.append(tuple(item))
            lists[key] = pairs
        wn = data.get("allow_white_noise", False)
        if not isinstance(wn, bool):
            problems.append(f"{source}: field 'allow_white_noise' must be true/false")
        if problems:
            raise ParameterError(problems)
        return cls(upper=lists["upper"], lower=lists["lower"], allow_white_noise=wn)

    @classmethod
    def from_file(cls, path):
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ParameterError([f"{path}: cannot read parameter file ({exc.strerror})"])
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParameterError([f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"])
        return cls.from_mapping(data, source=str(path))

    def to_mapping(self):
        out = {"upper": [list(p) for p in self.upper],
               "lower": [list(p) for p in self.lower]}
        if self.allow_white_noise:
            out["allow_white_noise"] = True
        return out


@dataclass(frozen=True)
class ValidatedFamily:
    params: WrightParams
    a_star: float
    mu: float
    K: float
    log_K: float
    entire: bool
    white_noise: bool

    @property
    def psi_upper(self):
        """Gamma-numerator pairs of the Laplace-transform series."""
        return tuple((b + beta, beta) for b, beta in self.params.lower)

    @property
    def psi_lower(self):
        return tuple((a + alpha, alpha) for a, alpha in self.params.upper)

    def log_moment(self, l):
        """log E[tau^l] of the mixing density, in extended precision."""
        if self.white_noise:
            return _LD(0)
        p = self.params
        num = [b + beta * (l + 1) for b, beta in p.lower]
        den = [a + alpha * (l + 1) for a, alpha in p.upper]
        return gamma_ratio_log(num, den) - _LD(self.log_K)


def validate(raw, require_entire=False):
    """Check the family constraints and compute a*, mu and K.

    Every violated constraint is reported. ``m = p = 0`` is accepted only with
    ``allow_white_noise`` (the Gaussian family, Psi = exp).
    """
    problems = []
    for i, (a, alpha) in enumerate(raw.upper, start=1):
        if not (math.isfinite(a) and math.isfinite(alpha)):
            problems.append(f"upper[{i}]: non-finite value")
            continue
        if alpha <= 0:
            problems.append(f"upper[{i}]: alpha_{i} = {alpha:g} must be > 0")
        if a + alpha <= 0:
            problems.append(f"upper[{i}]: a_{i} + alpha_{i} = {a + alpha:g} must be > 0")
    for j, (b, beta) in enumerate(raw.lower, start=1):
        if not (math.isfinite(b) and math.isfinite(beta)):
            problems.append(f"lower[{j}]: non-finite value")
            continue
        if beta <= 0:
            problems.append(f"lower[{j}]: beta_{j} = {beta:g} must be > 0")
        if b + beta <= 0:
            problems.append(f"lower[{j}]: b_{j} + beta_{j} = {b + beta:g} must be > 0")
    p, m = raw.p, raw.m
    a_star = math.fsum(beta for _, beta in raw.lower) - math.fsum(al for _, al in raw.upper)
    mu = (math.fsum(b for b, _ in raw.lower) - math.fsum(a for a, _ in raw.upper)
          - (p - m) / 2)
    white_noise = m == 0 and p == 0
    if white_noise and not raw.allow_white_noise:
        problems.append("m = p = 0 gives a* = 0 and mu = 0 (needs a* > 0, or a* = 0 with "
                        "mu < -1); set allow_white_noise to use the Gaussian family")
    elif not white_noise:
        if abs(a_star) <= 1e-14:
            if not mu < -1:
                problems.append(f"a* = 0 requires mu < -1, got mu = {mu:g}")
        elif a_star < 0:
            problems.append(f"a* = {a_star:g} must be > 0")
    entire = white_noise or 0 < a_star < 1
    if require_entire and not entire:
        problems.append(f"not entire: a* = {a_star:g} must lie in (0, 1)")
    if problems:
        raise ParameterError(problems)
    if white_noise:
        log_K = 0.0
    else:
        log_K = float(gamma_ratio_log([b + beta for b, beta in raw.lower],
                                      [a + alpha for a, alpha in raw.upper]))
    return ValidatedFamily(params=raw, a_star=a_star, mu=mu, K=math.exp(log_K),
                           log_K=log_K, entire=entire, white_noise=white_noise)


# ---------------------------------------------------------------------------
# series engine

@lru_cache(maxsize=64)
def _coefficients(upper, lower, kmax):
    """log|c_k|, sign c_k and a magnitude scale for k < kmax (extended precision).

    c_k = prod Gamma(B + beta k) / prod Gamma(A + alpha k) / k!
    """
    k = np.arange(kmax, dtype=_LD)
    logc = -log_gamma_real(k + 1)[0]
    scale = np.abs(logc).copy()
    sign = np.ones(kmax, dtype=int)
    for idx, (B, beta) in enumerate(upper):
        la, sa = log_gamma_real(_LD(B) + _LD(beta) * k)
        if (sa == 0).any():
            kk = int(np.nonzero(sa == 0)[0][0])
            raise DomainError(f"gwf: Gamma pole in numerator factor {idx + 1} at term "
                              f"k = {kk} (argument {B + beta * kk:g})")
        logc += la
        scale += np.abs(la)
        sign *= sa
    for A, alpha in lower:
        la, sa = log_gamma_real(_LD(A) + _LD(alpha) * k)
        zero = sa == 0  # 1/Gamma at a pole: exact zero term
        la = np.where(zero, 0, la)
        logc -= la
        scale += np.abs(la)
        sign *= sa
    return logc, sign, scale


def _radius(upper, lower):
    """Radius of convergence of the series (inf for entire series)."""
    delta = sum(al for _, al in lower) - sum(be for _, be in upper)
    if delta > -1 + 1e-14:
        return math.inf
    if delta < -1 - 1e-14:
        return 0.0
    return math.exp(sum(al * math.log(al) for _, al in lower)
                    - sum(be * math.log(be) for _, be in upper))


def _check_pairs(upper, lower):
    for name, seq in (("upper", upper), ("lower", lower)):
        for B, w in seq:
            if w <= 0:
                raise UnsupportedRegimeError(
                    f"gwf: non-positive weight {w:g} in {name} pairs is not supported")


def series_terms(upper_pairs, lower_pairs, z, kmax):
    """The first ``kmax`` series terms at scalar ``z`` (for consistency checks)."""
    upper, lower = _pairs(upper_pairs, "upper"), _pairs(lower_pairs, "lower")
    logc, sign, _ = _coefficients(upper, lower, int(kmax))
    z = complex(z)
    k = np.arange(kmax)
    if z == 0:
        mag = np.where(k == 0, np.exp(logc.astype(float)), 0.0)
        return mag * sign
    return sign * np.exp(logc.astype(float) + k * math.log(abs(z))) * np.exp(1j * k * np.angle(z))


def _series(upper, lower, z, rtol):
    """Sum the series at each entry of the 1-d complex array ``z``.

    Returns ``(value, err_est, cancellation)``; ``err_est`` is an absolute
    rounding-plus-truncation estimate.
    """
    nz = z.size
    absz = np.abs(z).astype(_LD)
    logabs = np.where(absz > 0, np.log(np.where(absz > 0, absz, 1)), -np.inf)
    theta = np.angle(z).astype(_LD)
    real_input = bool(np.all(z.imag == 0))
    kmax = 64
    while True:
        logc, sign, scale = _coefficients(upper, lower, kmax)
        k = np.arange(kmax, dtype=_LD)[:, None]
        with np.errstate(invalid="ignore", over="ignore"):
            loglt = logc[:, None] + np.where(k == 0, 0, k * logabs[None, :])
        with np.errstate(over="ignore"):
            mag = np.where(sign[:, None] == 0, _LD(0), np.exp(loglt))
        overflow = ~np.all(np.isfinite(mag) & (mag < _LD(1e300)), axis=0)
        mag[:, overflow] = 0
        if real_input:
            parity = np.where(z.real < 0, -1, 1)[None, :] ** np.arange(kmax)[:, None]
            terms = sign[:, None] * parity * mag
        else:
            terms = sign[:, None] * mag * np.exp(1j * (k * theta[None, :]))
        amag = np.abs(terms).astype(float)
        partial = np.abs(np.cumsum(terms.astype(np.complex128), axis=0))
        small = amag < rtol * partial
        small |= (amag == 0) & (partial == 0)
        ok = small.copy()
        ok[1:] &= small[:-1]
        ok[2:] &= small[:-2]
        ok[1:] &= amag[1:] <= amag[:-1]
        ok[:max(MIN_TERMS, 2)] = False
        done = ok.any(axis=0)
        if done.all():
            stop = ok.argmax(axis=0)
            break
        if kmax >= MAX_TERMS:
            raise ConvergenceError(f"gwf: no convergence within {MAX_TERMS} terms",
                                   best_estimate=terms.sum(axis=0).astype(np.complex128))
        kmax = min(2 * kmax, MAX_TERMS)

    # Neumaier-compensated sum down the columns, truncated at ``stop``
    dtype = _LD if real_input else np.clongdouble
    total = np.zeros(nz, dtype=dtype)
    comp = np.zeros(nz, dtype=dtype)
    abssum = np.zeros(nz, dtype=_LD)
    rounding = np.zeros(nz, dtype=_LD)
    for kk in range(int(stop.max()) + 1):
        active = kk <= stop
        t = np.where(active, terms[kk], 0).astype(dtype)
        s = total + t
        big = np.abs(total) >= np.abs(t)
        comp += np.where(big, (total - s) + t, (t - s) + total)
        total = s
        at = np.abs(t).astype(_LD)
        abssum += at
        rounding += at * (2 + scale[kk] + kk * np.where(np.isfinite(logabs), np.abs(logabs), 0))
    total = total + comp
    value = total.astype(np.complex128)
    err = (rounding * _LD_EPS).astype(float) + 2.2e-16 * np.abs(value)
    err += amag[stop, np.arange(nz)]
    with np.errstate(divide="ignore", invalid="ignore"):
        cancel = np.where(np.abs(value) > 0, abssum.astype(float) / np.abs(value), np.inf)
    cancel = np.where(abssum == 0, 1.0, cancel)
    value[overflow] = np.nan
    err[overflow] = np.inf
    cancel[overflow] = np.inf
    return value, err, cancel


def _as_array(z):
    arr = np.asarray(z)
    return arr, np.atleast_1d(arr.astype(np.complex128)).ravel()


def _finish(values, arr):
    out = values.reshape(arr.shape) if arr.ndim else values[0]
    if not np.iscomplexobj(arr):
        out = np.real(out)
        if isinstance(out, np.ndarray) and out.ndim == 0:
            out = out[()]
    return out


def _series_extended(upper, lower, z, rtol):
    """The series summed in arbitrary precision (mpmath).

    The working precision is the predicted cancellation (largest term over the
    sum) plus guard digits, raised and recomputed if the realized
    cancellation turns out larger.
    """
    import mpmath

    out = np.empty(z.size, dtype=np.complex128)
    logc, sign, _ = _coefficients(upper, lower, MAX_TERMS)
    k = np.arange(MAX_TERMS)
    digits = -math.log10(rtol) + 10
    for idx, zv in enumerate(z):
        if zv == 0:
            out[idx] = float(sign[0] * np.exp(logc[0]))
            continue
        lead = float(np.max(logc.astype(float) + k * math.log(abs(zv)))) / math.log(10)
        dps = int(digits + max(lead, 0)) + 10
        while True:
            with mpmath.workdps(dps):
                zm = mpmath.mpc(zv.real, zv.imag)
                total = mpmath.mpf(0)
                abssum = mpmath.mpf(0)
                small = 0
                for kk in range(MAX_TERMS):
                    term = zm ** kk / mpmath.factorial(kk)
                    for B, beta in upper:
                        term *= mpmath.gamma(mpmath.mpf(B) + mpmath.mpf(beta) * kk)
                    for A, alpha in lower:
                        term *= mpmath.rgamma(mpmath.mpf(A) + mpmath.mpf(alpha) * kk)
                    total += term
                    abssum += abs(term)
                    small = small + 1 if abs(term) < 10 ** (-digits) * abs(total) else 0
                    if kk >= MIN_TERMS and small >= 3:
                        break
                else:
                    raise ConvergenceError(f"gwf: no convergence within {MAX_TERMS} terms")
                lost = float(mpmath.log10(abssum / abs(total))) if total != 0 else dps
            if lost + digits + 5 <= dps:
                out[idx] = complex(total)
                break
            dps = int(lost + digits) + 10
    return out


def gwf(upper_pairs, lower_pairs, z, rtol=1e-12, fallback=True, extended=False):
    """Generalized Wright function by its power series.

    ``sum_k prod Gamma(B_i + beta_i k) / prod Gamma(A_j + alpha_j k) z^k / k!``

    Terms are formed in log space in extended precision and summed with
    compensation. When the cancellation indicator ``sum|t_k| / |sum t_k|``
    exceeds 1e8 a :class:`PrecisionWarning` is issued and, for negative real
    arguments, the value is recomputed by Mellin-Barnes quadrature
    (``fallback=True``).

    ``extended=True`` sums the series in arbitrary precision instead (slow,
    but free of cancellation; an independent check of the contour route).
    """
    upper, lower = _pairs(upper_pairs, "upper"), _pairs(lower_pairs, "lower")
    _check_pairs(upper, lower)
    arr, zz = _as_array(z)
    radius = _radius(upper, lower)
    if np.any((np.abs(zz) >= radius) & (zz != 0)):
        raise ConvergenceError(f"gwf: series diverges for |z| >= {radius:g}")
    if extended:
        return _finish(_series_extended(upper, lower, zz, rtol), arr)
    values, err, cancel = _series(upper, lower, zz, min(rtol, 1e-6))
    if np.any(np.isinf(err)):
        raise ConvergenceError("gwf: series terms overflow (argument too large)")
    bad = cancel > CANCELLATION_LIMIT
    if bad.any():
        warnings.warn(f"gwf: cancellation indicator {cancel.max():.3g} exceeds "
                      f"{CANCELLATION_LIMIT:g}", PrecisionWarning, stacklevel=2)
        neg = bad & (zz.imag == 0) & (zz.real < 0)
        if fallback and neg.any() and all(B > 0 for B, _ in upper):
            from .foxh import gwf_via_foxh
            values[neg] = gwf_via_foxh(upper, lower, -zz.real[neg], rtol=max(rtol, 1e-13))
    return _finish(values, arr)


def psi_eval(upper, lower, z, rtol=1e-10, complex_route=None):
    """Evaluate a completely monotone gWf choosing the most accurate route.

    The series is used wherever its predicted error is below ``rtol``
    relative. Remaining arguments ``z`` with ``-z`` inside the sector of the
    Mellin-Barnes representation (this includes every negative real) go
    through contour quadrature; anything else goes to ``complex_route`` (a
    callable on the remaining arguments) when supplied.
    """
    from .foxh import gwf_sector_halfwidth, gwf_via_foxh

    upper, lower = _pairs(upper, "upper"), _pairs(lower, "lower")
    _check_pairs(upper, lower)
    arr, zz = _as_array(z)
    radius = _radius(upper, lower)
    values = np.full(zz.shape, np.nan, dtype=np.complex128)
    inside = (np.abs(zz) < 0.95 * radius) | (zz == 0)
    need = ~inside
    if inside.any():
        v, err, _ = _series(upper, lower, zz[inside], min(rtol, 1e-6) * 1e-2)
        values[inside] = v
        poor = ~(err <= rtol * np.abs(v))
        need[np.nonzero(inside)[0][poor]] = True
    if not need.any():
        return _finish(values, arr)
    try:
        halfwidth = gwf_sector_halfwidth(upper, lower)
    except (UnsupportedRegimeError, ParameterError):
        halfwidth = 0.0
    x = -zz
    sector = need & (x != 0) & (np.abs(np.angle(x)) < 0.8 * halfwidth)
    real = sector & (x.imag == 0)
    if real.any():
        values[real] = gwf_via_foxh(upper, lower, x.real[real], rtol=rtol * 1e-2)
    cplx = sector & ~real
    if cplx.any():
        values[cplx] = gwf_via_foxh(upper, lower, x[cplx], rtol=rtol * 1e-2)
    # positive reals leave the series only on overflow; nothing else can help
    rest = need & ~sector & ~((zz.imag == 0) & (zz.real > 0))
    if rest.any():
        if complex_route is not None:
            values[rest] = complex_route(zz[rest])
        elif np.all(np.isfinite(values[rest])):
            warnings.warn("psi: series accuracy below rtol outside the contour sector",
                          PrecisionWarning, stacklevel=2)
        else:
            raise UnsupportedRegimeError(
                "psi: argument outside the series range and the contour sector")
    if not np.all(np.isfinite(values)):
        bad = zz[~np.isfinite(values)][0]
        raise ConvergenceError(f"psi: value at z = {bad:g} is not representable (overflow)")
    return _finish(values, arr)


def family_psi(fam, z, rtol=1e-10):
    """Psi(z) of a validated family, *without* the 1/K normalization.

    Gaussian (white-noise) family: Psi = exp. Otherwise the series with
    parameters ``(b_j + beta_j, beta_j)`` over ``(a_i + alpha_i, alpha_i)``,
    switching to Mellin-Barnes quadrature (negative reals) or to the Laplace
    integral of the mixing density (complex) where the series cancels.
    """
    if fam.white_noise:
        return np.exp(z)

    def via_mixing(w):
        from .fhdam import fhdensity, laplace_complex
        return fam.K * laplace_complex(fhdensity(fam), -w, rtol=max(rtol, 1e-12))

    route = via_mixing if fam.a_star < 1 else None
    return psi_eval(fam.psi_upper, fam.psi_lower, z, rtol=rtol, complex_route=route)
