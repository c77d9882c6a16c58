"""Generalized Wright measures on R^d.

The measure with characteristic function ``Psi(-|y|^2/2)/K`` is the Gaussian
scale mixture ``x = sqrt(tau) * N(0, I_d)`` with ``tau`` drawn from the mixing
density of :mod:`gwright.fhdam`.
"""
from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._backend import thread_cap
from .errors import DomainError, StateError, UnsupportedRegimeError
from .fhdam import FHDensity, fhdensity, half_order_integral
from .foxh import FoxHParams, foxh_eval
from .specfun import make_rng
from .wright import family_psi

__all__ = ["GWMeasure", "gwmeasure", "CHUNK_ROWS", "write_samples_csv"]

CHUNK_ROWS = 2 ** 16


def _sq(v):
    v = np.asarray(v, dtype=float)
    return np.sum(v * v, axis=-1)


@dataclass(frozen=True)
class GWMeasure:
    """A mixing law paired with a dimension ``d``."""

    mixing: FHDensity
    d: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"GWMeasure: d must be an integer >= 1, got {self.d}")

    @property
    def fam(self):
        return self.mixing.fam

    def _check_dim(self, v, name):
        v = np.asarray(v, dtype=float)
        if v.shape[-1:] != (self.d,):
            raise DomainError(f"{name}: expected trailing dimension {self.d}, got {v.shape}")
        return v

    def char_fn(self, y):
        """``Psi(-(y,y)/2)/K``; ``y`` has shape ``(..., d)``."""
        y = self._check_dim(y, "char_fn")
        return np.real(family_psi(self.fam, -_sq(y) / 2)) / self.fam.K

    def laplace_fn(self, lam, phi):
        """``E exp(lam (x, phi)) = Psi(lam^2 (phi,phi)/2)/K``."""
        phi = self._check_dim(phi, "laplace_fn")
        return np.real(family_psi(self.fam, lam ** 2 * _sq(phi) / 2)) / self.fam.K

    def mixed_moment(self, k):
        """``E prod x_i^{k_i}``: 0 if any k_i is odd, else
        ``E[tau^n] prod (2n_i)! / (n_i! 2^{n_i})`` with ``n = sum n_i``."""
        k = tuple(int(v) for v in k)
        if len(k) != self.d or any(v < 0 for v in k):
            raise DomainError(f"mixed_moment: need {self.d} non-negative orders, got {k}")
        if any(v % 2 for v in k):
            return 0.0
        half = [v // 2 for v in k]
        gauss = math.prod(math.factorial(2 * h) // (math.factorial(h) * 2 ** h) for h in half)
        return self.mixing.moment(sum(half)) * gauss

    def check_density_dimension(self):
        """Raise unless ``2(b_j + beta_j) > beta_j d`` for every j."""
        for j, (b, beta) in enumerate(self.fam.params.lower, start=1):
            if not 2 * (b + beta) > beta * self.d:
                raise UnsupportedRegimeError(
                    f"density: d = {self.d} needs 2(b_{j} + beta_{j}) > beta_{j} d, "
                    f"got {2 * (b + beta):g} <= {beta * self.d:g}")

    def density(self, x, route="mixture", rtol=1e-8):
        """Lebesgue density at ``x`` (shape ``(..., d)``).

        ``route="mixture"`` integrates ``(2 pi tau)^{-d/2} exp(-|x|^2/(2 tau))``
        against the mixing density; ``route="foxh"`` evaluates the equivalent
        ``H^{m+1,0}_{p,m+1}`` at ``|x|^2/2`` (``x != 0``).
        """
        x = self._check_dim(x, "density")
        self.check_density_dimension()
        r2 = np.atleast_1d(_sq(x)).ravel()
        d = self.d
        if self.mixing.point_mass:
            out = (2 * math.pi) ** (-d / 2) * np.exp(-r2 / 2)
        elif route == "mixture":
            out = self._density_mixture(r2, rtol)
        elif route == "foxh":
            out = self._density_foxh(r2, rtol)
        else:
            raise ValueError(f"density: unknown route {route!r}")
        out = out.reshape(np.shape(_sq(x)))
        return out[()] if out.ndim == 0 else out

    def _density_mixture(self, r2, rtol):
        d = self.d

        def kern(t):
            with np.errstate(over="ignore", under="ignore"):
                return np.exp(-r2[None, :] / (2 * t[:, None])
                              - 0.5 * (d - 1) * np.log(t[:, None]))

        val = half_order_integral(self.mixing, kern, rtol=rtol)
        return (2 * math.pi) ** (-d / 2) * np.atleast_1d(val)

    def _density_foxh(self, r2, rtol):
        if np.any(r2 == 0):
            raise DomainError("density: the Fox-H route needs x != 0")
        p = self.fam.params
        d = self.d
        upper = tuple((a + al * (1 - d / 2), al) for a, al in p.upper)
        lower = ((0.0, 1.0),) + tuple((b + be * (1 - d / 2), be) for b, be in p.lower)
        params = FoxHParams(m=p.m + 1, n=0, p=p.p, q=p.m + 1, upper=upper, lower=lower)
        h = foxh_eval(params, r2 / 2, rtol=min(rtol, 1e-10))
        return (2 * math.pi) ** (-d / 2) * np.atleast_1d(h) / self.fam.K

    def sample_batch(self, rng, N, threads=None):
        """``N x d`` draws ``sqrt(tau) * N(0, I_d)``.

        Rows are produced in chunks of :data:`CHUNK_ROWS`; every chunk gets its
        own generator seeded from ``rng`` up front, so the output depends only
        on the seed, never on ``threads`` (default: ``GWRIGHT_THREADS``).
        """
        if N < 1:
            raise DomainError("sample_batch: N must be >= 1")
        if not self.mixing.point_mass and self.mixing.grid is None:
            raise StateError("sample_batch: mixing sampler not built (call build_sampler())")
        rng = make_rng(rng)
        sizes = [min(CHUNK_ROWS, N - start) for start in range(0, N, CHUNK_ROWS)]
        seeds = rng.integers(0, 2 ** 63, size=len(sizes), dtype=np.uint64)

        def chunk(i):
            child = make_rng(int(seeds[i]))
            tau = np.asarray(self.mixing.sample(child, sizes[i]), dtype=float)
            z = child.standard_normal((sizes[i], self.d))
            return np.sqrt(tau)[:, None] * z

        workers = min(threads or thread_cap(), len(sizes))
        if workers <= 1:
            parts = [chunk(i) for i in range(len(sizes))]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(chunk, range(len(sizes))))
        return np.concatenate(parts, axis=0)

    def t_transform_exp(self, x, eta, phi1, phi2=None):
        """``Psi(-x^2 <eta,eta>/2 - <phi,phi>/2 - x <phi,eta>)/K`` with
        ``phi = phi1 + i phi2`` and the bilinear pairing."""
        if not self.fam.entire:
            raise UnsupportedRegimeError("t_transform_exp: needs an entire family")
        eta = self._check_dim(eta, "t_transform_exp")
        phi = self._check_dim(phi1, "t_transform_exp").astype(complex)
        if phi2 is not None:
            phi = phi + 1j * self._check_dim(phi2, "t_transform_exp")
        arg = (-x * x * np.dot(eta, eta) / 2 - np.sum(phi * phi) / 2
               - x * np.sum(phi * eta))
        return complex(family_psi(self.fam, complex(arg))) / self.fam.K

    def moment_report(self, max_order):
        """Mapping ``"k1,...,kd" -> moment`` for all total orders <= max_order."""
        out = {}
        for k in itertools.product(range(max_order + 1), repeat=self.d):
            if sum(k) <= max_order:
                out[",".join(map(str, k))] = self.mixed_moment(k)
        return out


def gwmeasure(fam, d, build_sampler=False):
    """Measure of ``fam`` in dimension ``d``, optionally with the sampler built."""
    mixing = fhdensity(fam)
    if build_sampler:
        mixing = _built(fam)
    return GWMeasure(mixing=mixing, d=d)


_BUILT = {}


def _built(fam):
    if fam not in _BUILT:
        _BUILT[fam] = fhdensity(fam).build_sampler()
    return _BUILT[fam]


def write_samples_csv(samples, fh):
    """CSV with header ``x1..xd`` and 17 significant digits."""
    samples = np.atleast_2d(samples)
    header = ",".join(f"x{i + 1}" for i in range(samples.shape[1]))
    np.savetxt(fh, samples, fmt="%.17g", delimiter=",", header=header, comments="")


def write_moment_report(report, fh):
    json.dump(report, fh, indent=2, sort_keys=True)
    fh.write("\n")
