"""Mixing densities: ``rho(tau) = (1/K) H^{m,0}_{p,m}[tau | (a_i, alpha_i); (b_j, beta_j)]``.

These are probability densities on (0, inf) with moments of every order and
Laplace transform ``Psi(-s)/K``. The white-noise family is the unit point
mass at ``tau = 1`` and is represented without a density.
"""
from __future__ import annotations

import csv
import math
from collections import OrderedDict
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import (ConstructionError, DomainError, StateError,
                     UnsupportedRegimeError)
from .foxh import FoxHParams, foxh_eval
from .specfun import integrate, make_rng
from .wright import family_psi

__all__ = ["CDFTable", "FHDensity", "fhdensity", "laplace_complex", "half_order_integral"]

_CACHE_SIZE = 8192


@dataclass(frozen=True)
class CDFTable:
    """Nodes, CDF values and ``log(cdf) - log(sf)`` (the interpolation variable)."""

    nodes: np.ndarray
    cdf_values: np.ndarray
    logit: np.ndarray


class FHDensity:
    """Density, moments, Laplace transform, CDF and sampler of a mixing law.

    Parameters
    ----------
    fam : ValidatedFamily
    grid : CDFTable, optional
        Tabulated CDF; populated by :meth:`build_sampler`.
    """

    def __init__(self, fam, grid=None, nonneg_checked=False, _cache=None):
        self.fam = fam
        self.grid = grid
        self.nonneg_checked = nonneg_checked
        self._cache = OrderedDict() if _cache is None else _cache
        self._inverse = None
        p = fam.params
        if fam.white_noise:
            self.hparams = None
        else:
            self.hparams = FoxHParams(m=p.m, n=0, p=p.p, q=p.m,
                                      upper=p.upper, lower=p.lower)
        if grid is not None and not fam.white_noise:
            self._inverse = PchipInterpolator(grid.logit, np.log(grid.nodes))

    @property
    def point_mass(self):
        return self.fam.white_noise

    @property
    def tol_neg(self):
        """Magnitude below which negative density values count as rounding."""
        return 1e-10 / self.moment(1)

    def __repr__(self):
        state = "sampler built" if self.grid is not None or self.point_mass else "no sampler"
        return f"FHDensity({self.fam.params!r}, {state})"

    # -- evaluation ---------------------------------------------------------

    def raw_density(self, tau, rtol=1e-10):
        """Contour value of the density without clamping (vectorized, cached)."""
        if self.point_mass:
            raise UnsupportedRegimeError("white-noise mixing law is a point mass; no density")
        arr = np.asarray(tau, dtype=float)
        flat = np.atleast_1d(arr).ravel()
        if np.any(~(flat > 0)):
            raise DomainError("density: tau must be > 0")
        out = np.empty(flat.shape)
        missing = []
        for i, t in enumerate(flat):
            key = (float(t), rtol)
            hit = self._cache.get(key)
            if hit is None:
                missing.append(i)
            else:
                self._cache.move_to_end(key)
                out[i] = hit
        if missing:
            idx = np.asarray(missing)
            todo, inv = np.unique(flat[idx], return_inverse=True)
            vals = foxh_eval(self.hparams, todo, rtol=rtol) / self.fam.K
            out[idx] = vals[inv]
            for t, v in zip(todo, vals):
                self._cache[(float(t), rtol)] = float(v)
            while len(self._cache) > _CACHE_SIZE:
                self._cache.popitem(last=False)
        out = out.reshape(arr.shape)
        return out[()] if out.ndim == 0 else out

    def density(self, tau, rtol=1e-10):
        """rho(tau) for tau > 0; rounding-level negatives are clamped to 0."""
        val = np.asarray(self.raw_density(tau, rtol))
        val = np.where((val < 0) & (val > -self.tol_neg), 0.0, val)
        return val[()] if val.ndim == 0 else val

    def moment(self, l):
        """E[tau^l] = (1/K) prod Gamma(b + beta(l+1)) / prod Gamma(a + alpha(l+1))."""
        if l < 0:
            raise DomainError(f"moment: order must be >= 0, got {l}")
        return float(np.exp(self.fam.log_moment(l)))

    def laplace(self, s, rtol=1e-10):
        """E[exp(-s tau)] = Psi(-s)/K, for s >= 0 (any real s if entire)."""
        s = np.asarray(s, dtype=float)
        if np.any(s < 0) and not self.fam.entire:
            raise DomainError("laplace: s < 0 needs an entire family")
        return family_psi(self.fam, -s, rtol=rtol) / self.fam.K

    def expect(self, g, rtol=1e-8):
        """E[g(tau)] by quadrature against the density (``g`` vectorized)."""
        if self.point_mass:
            return np.asarray(g(np.ones(1)))[0]
        drtol = min(1e-10, rtol * 1e-2)
        res = integrate(lambda t: _mul(g(t), self._density_q(t, drtol)),
                        0.0, np.inf, rtol=rtol)
        return res.value

    def _density_q(self, t, rtol):
        """Density inside quadratures: 0 at tau = 0 and at overflowing nodes."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        ok = (t > 0) & np.isfinite(t)
        if ok.any():
            out[ok] = self.density(t[ok], rtol)
        return out

    def _mb(self, x, upper_cut):
        fp = self.fam.params
        if upper_cut:
            params = FoxHParams(m=fp.m, n=1, p=fp.p + 1, q=fp.m + 1,
                                upper=((0.0, 1.0),) + fp.upper,
                                lower=fp.lower + ((-1.0, 1.0),))
        else:
            params = FoxHParams(m=fp.m + 1, n=0, p=fp.p + 1, q=fp.m + 1,
                                upper=fp.upper + ((0.0, 1.0),),
                                lower=fp.lower + ((-1.0, 1.0),))
        return x * foxh_eval(params, x, rtol=1e-10) / self.fam.K

    def _cdf_sf(self, x):
        """(P(tau <= x), P(tau > x)), each from its own contour where small."""
        lower = self._mb(x, True)
        upper = lower > 0.5
        sf = 1 - lower
        if upper.any():
            sf[upper] = self._mb(x[upper], False)
            lower[upper] = 1 - sf[upper]
        return np.clip(lower, 0, 1), np.clip(sf, 0, 1)

    def cdf(self, x):
        """P(tau <= x) from a Mellin-Barnes integral (no density quadrature)."""
        x = np.asarray(x, dtype=float)
        if self.point_mass:
            return np.where(x >= 1, 1.0, 0.0)[()]
        out = np.zeros(x.shape)
        pos = x > 0
        if pos.any():
            out[pos] = self._cdf_sf(x[pos])[0]
        return out[()]

    def sf(self, x):
        """P(tau > x), accurate in the upper tail."""
        x = np.asarray(x, dtype=float)
        if self.point_mass:
            return np.where(x >= 1, 0.0, 1.0)[()]
        out = np.ones(x.shape)
        pos = x > 0
        if pos.any():
            out[pos] = self._cdf_sf(x[pos])[1]
        return out[()]

    # -- sampling -----------------------------------------------------------

    def build_sampler(self, target_quantile_tail=1e-8, n_nodes=1024):
        """Return a copy carrying a tabulated CDF for inverse-CDF sampling.

        The range ``[q_lo, q_hi]`` is grown geometrically from the mean until
        ``tau * density < 1e-12`` at both ends and each tail holds mass below
        ``target_quantile_tail``. Nodes are a log-spaced skeleton (a quarter of
        ``n_nodes``) refined by nodes at equal probability steps; the CDF at
        each node comes from the Mellin-Barnes integral (the survival function
        from its own contour, so the upper tail keeps relative accuracy), and
        the inverse is a monotone cubic in ``(log(cdf/sf), log tau)``.

        Raises
        ------
        ConstructionError
            If the tails cannot be bracketed or the density is negative
            beyond ``tol_neg`` somewhere in the range.
        """
        if self.point_mass:
            return FHDensity(self.fam, grid=None, nonneg_checked=True, _cache=self._cache)
        center = self.moment(1)
        q_lo = center
        for _ in range(200):
            q_lo /= 4
            if q_lo * self.density(q_lo) < 1e-12 and self.cdf(q_lo) < target_quantile_tail:
                break
        else:
            raise ConstructionError("build_sampler: lower tail could not be bracketed")
        q_hi = center
        for _ in range(200):
            q_hi *= 2
            if q_hi * self.density(q_hi) < 1e-12 and self.sf(q_hi) < target_quantile_tail:
                break
        else:
            raise ConstructionError("build_sampler: upper tail could not be bracketed")

        scan = np.geomspace(q_lo, q_hi, 512)
        raw = self.raw_density(scan)
        floor = -1e-10 * raw.max()
        if raw.min() < floor:
            bad = scan[raw.argmin()]
            raise ConstructionError(f"build_sampler: density {raw.min():.3g} < 0 at "
                                    f"tau = {bad:.6g}; family is not a valid mixing law")

        # log-spaced skeleton plus nodes at equal probability steps
        skeleton = np.geomspace(q_lo, q_hi, n_nodes // 4)
        y_skel = np.maximum.accumulate(_logit(*self._cdf_sf(skeleton)))
        ok = np.concatenate([[True], np.diff(y_skel) > 0])
        coarse = PchipInterpolator(y_skel[ok], np.log(skeleton[ok]))
        levels = np.linspace(0, 1, n_nodes - skeleton.size + 2)[1:-1]
        levels = np.clip(_logit(levels, 1 - levels), y_skel[0], y_skel[-1])
        nodes = np.unique(np.concatenate([skeleton, np.exp(coarse(levels))]))
        cdf, sf = self._cdf_sf(nodes)
        y = _logit(cdf, sf)
        keep = np.concatenate([[True], np.diff(y) > 0])
        keep &= np.concatenate([[True], y[1:] > np.maximum.accumulate(y)[:-1]])
        table = CDFTable(nodes=nodes[keep], cdf_values=cdf[keep], logit=y[keep])
        if not (table.cdf_values[0] <= target_quantile_tail
                and sf[keep][-1] <= target_quantile_tail):
            raise ConstructionError(
                f"build_sampler: tabulated mass [{table.cdf_values[0]:.3g}, "
                f"1 - {sf[keep][-1]:.3g}] does not cover the target range")
        return FHDensity(self.fam, grid=table, nonneg_checked=True, _cache=self._cache)

    def sample(self, rng, size=None):
        """Draw from the mixing law (inverse CDF on the tabulated grid).

        Uniforms falling in the untabulated tails (mass below the target
        quantile tail) are mapped to the table end points.
        """
        if self.point_mass:
            return 1.0 if size is None else np.ones(size)
        if self._inverse is None:
            raise StateError("sample: call build_sampler() first")
        rng = make_rng(rng)
        u = rng.random(size)
        with np.errstate(divide="ignore"):
            y = _logit(u, 1 - u)
        y = np.clip(y, self.grid.logit[0], self.grid.logit[-1])
        return np.exp(self._inverse(y))

    def export_cdf_csv(self, path):
        """Write the table as two columns ``node,cdf``."""
        if self.grid is None:
            raise StateError("export_cdf_csv: no table (call build_sampler())")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["node", "cdf"])
            for n, c in zip(self.grid.nodes, self.grid.cdf_values):
                writer.writerow([f"{n:.17g}", f"{c:.17g}"])


def _logit(cdf, sf):
    return np.log(cdf) - np.log(sf)


def _mul(gv, dens):
    gv = np.asarray(gv)
    return gv * dens.reshape(dens.shape + (1,) * (gv.ndim - 1))


@lru_cache(maxsize=32)
def fhdensity(fam):
    """Shared (cached) density object of a validated family."""
    return FHDensity(fam)


def laplace_complex(rho, w, rtol=1e-10):
    """``int exp(-w tau) rho(tau) dtau`` for complex ``w`` with Re w >= 0."""
    w = np.asarray(w, dtype=np.complex128)
    flat = np.atleast_1d(w).ravel()
    if rho.point_mass:
        out = np.exp(-flat)
    else:
        if np.any(flat.real < -1e-14) and not rho.fam.entire:
            raise DomainError("laplace_complex: Re w < 0 needs an entire family")
        drtol = min(1e-10, rtol * 1e-2)

        def f(t):
            with np.errstate(over="ignore", invalid="ignore"):
                e = np.exp(-np.outer(t, flat))
            e = np.where(np.isfinite(e), e, 0)
            return e * rho._density_q(t, drtol)[:, None]

        out = integrate(f, 0.0, np.inf, rtol=max(rtol, 1e-13), atol=1e-300).value
    out = np.asarray(out).reshape(w.shape)
    return out[()] if out.ndim == 0 else out


def half_order_integral(rho, kern, rtol=1e-8):
    """``int rho(r) r^{-1/2} kern(r) dr`` via ``r = u^2`` (smooth at r = 0).

    ``kern`` is vectorized and may return ``(n,)`` or ``(n, k)`` values.
    """
    drtol = min(1e-10, rtol * 1e-2)

    def f(u):
        u = np.asarray(u, dtype=float)
        r = u * u
        ok = (r > 0) & np.isfinite(r)
        dens = np.zeros(u.shape)
        if ok.any():
            dens[ok] = rho.density(r[ok], drtol)
        kv = np.asarray(kern(np.where(ok, r, 1.0)))
        kv = np.where(ok.reshape(ok.shape + (1,) * (kv.ndim - 1)), kv, 0)
        return 2 * _mul(kv, dens)

    return integrate(f, 0.0, np.inf, rtol=rtol).value
