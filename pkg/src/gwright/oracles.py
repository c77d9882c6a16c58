"""Independent verification: Monte Carlo estimators and quadrature cross-checks.

The check suite compares every closed form the library exposes against an
estimate computed another way, and reports JSON-ready records.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .donsker import check_donsker_params, donsker_at_a, donsker_expectation
from .errors import DomainError
from .fhdam import fhdensity
from .foxh import gwf_via_foxh
from .gwm import gwmeasure
from .polys import fox_hermite
from .specfun import integrate
from .wright import family_psi, gwf

__all__ = [
    "EstimateWithError",
    "mc_moment",
    "mc_char_fn",
    "analytic_checks",
    "monte_carlo_checks",
    "run_suite",
    "SE_THRESHOLD",
    "SE_THRESHOLD_WIDE",
]

SE_THRESHOLD = 4.0
SE_THRESHOLD_WIDE = 5.0
WIDEN_ABOVE = 20
CHAR_FN_RADII = (0.25, 0.5, 1.0, 1.5, 2.0)


@dataclass(frozen=True)
class EstimateWithError:
    """Sample mean with standard error ``std / sqrt(N)``.

    For complex estimates ``std_error`` is the complex number whose real and
    imaginary parts are the standard errors of the two components.
    """

    value: complex
    std_error: complex
    n_samples: int


def _samples(samples):
    x = np.asarray(samples, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] < 2:
        raise DomainError("oracles: need an N x d sample matrix with N >= 2")
    return x


def _mean_se(v):
    n = v.shape[0]
    return float(np.mean(v)), float(np.std(v, ddof=1) / math.sqrt(n))


def mc_moment(samples, k):
    """Estimate ``E prod x_i^{k_i}``."""
    x = _samples(samples)
    k = tuple(int(v) for v in k)
    if len(k) != x.shape[1]:
        raise DomainError(f"mc_moment: multi-index has {len(k)} entries, samples have {x.shape[1]}")
    prod = np.ones(x.shape[0])
    for j, kj in enumerate(k):
        if kj:
            prod = prod * x[:, j] ** kj
    value, se = _mean_se(prod)
    return EstimateWithError(value, se, x.shape[0])


def mc_char_fn(samples, y):
    """Estimate ``E exp(i (y, x))`` with componentwise standard errors."""
    x = _samples(samples)
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size != x.shape[1]:
        raise DomainError(f"mc_char_fn: y has {y.size} entries, samples have {x.shape[1]}")
    phase = x @ y
    re, se_re = _mean_se(np.cos(phase))
    im, se_im = _mean_se(np.sin(phase))
    return EstimateWithError(complex(re, im), complex(se_re, se_im), x.shape[0])


def _record(name, expected, observed, tolerance):
    expected, observed, tolerance = float(expected), float(observed), float(tolerance)
    ok = bool(np.isfinite(observed) and abs(observed - expected) <= tolerance)
    return {"name": name, "expected": expected, "observed": observed,
            "tolerance": tolerance, "pass": ok}


def _rel(name, expected, observed, rtol):
    return _record(name, expected, observed, rtol * max(abs(float(expected)), 1e-300))


def _guard(name, fn, records):
    """Run one check; a raised error becomes a failed record."""
    try:
        records.extend(fn())
    except Exception as exc:  # reported, never swallowed silently
        records.append({"name": name, "expected": None, "observed": None,
                        "tolerance": None, "pass": False,
                        "error": f"{type(exc).__name__}: {exc}"})


def analytic_checks(fam, label="family"):
    """Deterministic cross-checks of one family; list of records."""
    out = []
    rho = fhdensity(fam)

    def psi_at_zero():
        return [_rel(f"{label}/psi(0)=K", fam.K, np.real(family_psi(fam, 0.0)), 1e-12)]

    _guard(f"{label}/psi(0)", psi_at_zero, out)

    if not fam.white_noise:
        def duality():
            z = np.array([0.5, 1.0, 2.0, 5.0, 10.0])
            series = np.real(gwf(fam.psi_upper, fam.psi_lower, -z, extended=True))
            contour = gwf_via_foxh(fam.psi_upper, fam.psi_lower, z)
            return [_rel(f"{label}/duality z={v:g}", s, c, 1e-8)
                    for v, s, c in zip(z, series, contour)]

        def moments():
            recs = []
            for l in range(7):
                q = integrate(lambda t, l=l: t ** l * rho.density(t), rtol=1e-9).value
                recs.append(_rel(f"{label}/moment l={l}", rho.moment(l), q, 1e-6))
            return recs

        def laplace():
            recs = []
            for s in (0.1, 1.0, 10.0):
                closed = np.real(family_psi(fam, -s)) / fam.K
                q = integrate(lambda t, s=s: np.exp(-s * t) * rho.density(t), rtol=1e-9).value
                recs.append(_rel(f"{label}/laplace s={s:g}", closed, q, 1e-6))
            return recs

        def density_routes():
            g = gwmeasure(fam, 1)
            try:
                g.check_density_dimension()
            except Exception:
                return []
            x = np.linspace(0.25, 4.0, 9)[:, None]
            a = g.density(x, route="mixture")
            b = g.density(x, route="foxh")
            return [_rel(f"{label}/density routes x={v:.4g}", bb, aa, 1e-6)
                    for v, aa, bb in zip(x[:, 0], a, b)]

        _guard(f"{label}/duality", duality, out)
        _guard(f"{label}/moments", moments, out)
        _guard(f"{label}/laplace", laplace, out)
        _guard(f"{label}/density routes", density_routes, out)

    def hermite():
        recs = []
        for n in range(1, 9):
            f, df = fox_hermite(fam, n), fox_hermite(fam, n - 1)
            got = f.derivative().coeffs
            for j, (c, e) in enumerate(zip(got, df.coeffs)):
                recs.append(_record(f"{label}/hermite D F_{n} coeff {j}",
                                    n * e, c, 1e-12 * max(1.0, abs(n * e))))
        return recs

    _guard(f"{label}/hermite", hermite, out)

    if check_donsker_params(fam):
        def donsker():
            e = donsker_expectation(fam, 1.0)
            g = gwmeasure(fam, 1)
            recs = [_rel(f"{label}/donsker a=0", e, donsker_at_a(fam, 1.0, 0.0), 1e-6)]
            for a in (0.5, 1.0, 2.0):
                recs.append(_rel(f"{label}/donsker a={a:g}", g.density([a]),
                                 donsker_at_a(fam, 1.0, a), 1e-6))
            return recs

        _guard(f"{label}/donsker", donsker, out)
    return out


def _multi_indices(d, max_order):
    return [k for k in itertools.product(range(max_order + 1), repeat=d)
            if 0 < sum(k) <= max_order]


def _char_points(d):
    pts = []
    for j, r in enumerate(CHAR_FN_RADII):
        if d == 1:
            pts.append(np.array([r]))
        else:
            angle = (j + 0.5) * math.pi / len(CHAR_FN_RADII)
            v = np.zeros(d)
            v[0], v[1] = r * math.cos(angle), r * math.sin(angle)
            pts.append(v)
    return pts


def monte_carlo_checks(fam, dims=(1, 2), n=10 ** 6, seed=0, label="family"):
    """Raw Monte Carlo comparisons ``(name, expected, estimate)``.

    Thresholds are applied by :func:`finalize` once the total number of
    comparisons in the suite is known.
    """
    raw = []
    rng = np.random.Generator(np.random.Philox(seed))
    for d in dims:
        g = gwmeasure(fam, d, build_sampler=True)
        x = g.sample_batch(int(rng.integers(0, 2 ** 63)), n)
        for k in _multi_indices(d, 4):
            raw.append((f"{label}/d={d} moment {k}", g.mixed_moment(k), mc_moment(x, k)))
        for y in _char_points(d):
            est = mc_char_fn(x, y)
            tag = f"{label}/d={d} charfn |y|={np.linalg.norm(y):g}"
            raw.append((tag + " re", g.char_fn(y), EstimateWithError(
                est.value.real, est.std_error.real, est.n_samples)))
            raw.append((tag + " im", 0.0, EstimateWithError(
                est.value.imag, est.std_error.imag, est.n_samples)))
    return raw


def finalize(raw):
    """Turn raw MC comparisons into records at 4 SE, or 5 SE when there are
    more than 20 of them."""
    k = SE_THRESHOLD_WIDE if len(raw) > WIDEN_ABOVE else SE_THRESHOLD
    return [_record(name, exp, est.value, k * est.std_error) for name, exp, est in raw]


def run_suite(families, suite="all", n=10 ** 6, seed=0):
    """Run the check suite over ``{label: ValidatedFamily}``.

    ``suite`` is ``"analytic"``, ``"mc"`` or ``"all"``.
    """
    if suite not in ("analytic", "mc", "all"):
        raise DomainError(f"run_suite: unknown suite {suite!r}")
    records = []
    raw = []
    for i, (label, fam) in enumerate(families.items()):
        if suite in ("analytic", "all"):
            records.extend(analytic_checks(fam, label))
        if suite in ("mc", "all"):
            _guard(f"{label}/monte carlo",
                   lambda: raw.extend(monte_carlo_checks(fam, n=n, seed=seed + i, label=label)) or [],
                   records)
    return records + finalize(raw)
