"""Donsker's delta for generalized Wright measures.

Everything is a function of three pairings: ``<eta,eta>`` (real, > 0) and the
bilinear ``<phi,phi>``, ``<eta,phi>`` for a complex ``phi = phi1 + i phi2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, ParameterError
from .fhdam import fhdensity, half_order_integral
from .foxh import FoxHParams, foxh_eval
from .specfun import gamma_ratio_log, integrate
from .wright import psi_eval

__all__ = [
    "PairingData",
    "check_donsker_params",
    "donsker_t_transform",
    "donsker_expectation",
    "donsker_at_a",
    "integrability_bound",
    "integrability_lhs",
    "donsker_report",
]


@dataclass(frozen=True)
class PairingData:
    eta_eta: float
    phi_phi: complex = 0j
    eta_phi: complex = 0j

    def __post_init__(self):
        if not self.eta_eta > 0:
            raise DomainError(f"PairingData: <eta,eta> must be > 0, got {self.eta_eta}")
        object.__setattr__(self, "phi_phi", complex(self.phi_phi))
        object.__setattr__(self, "eta_phi", complex(self.eta_phi))

    @classmethod
    def from_vectors(cls, eta, phi1=None, phi2=None):
        eta = np.asarray(eta, dtype=float)
        phi = np.zeros(eta.shape, dtype=complex)
        if phi1 is not None:
            phi = phi + np.asarray(phi1, dtype=float)
        if phi2 is not None:
            phi = phi + 1j * np.asarray(phi2, dtype=float)
        return cls(eta_eta=float(eta @ eta), phi_phi=complex(np.sum(phi * phi)),
                   eta_phi=complex(np.sum(eta * phi)))

    @property
    def w(self):
        """``(<phi,phi> - <eta,phi>^2/<eta,eta>)/2``; the T-transform is Psi'(-w)."""
        return 0.5 * (self.phi_phi - self.eta_phi ** 2 / self.eta_eta)


def check_donsker_params(fam):
    """True iff the family is entire and ``2 b_j + beta_j > 0`` for every j."""
    return fam.entire and all(2 * b + beta > 0 for b, beta in fam.params.lower)


def _require(fam):
    if not check_donsker_params(fam):
        problems = [f"2 b_{j} + beta_{j} = {2 * b + beta:g} must be > 0"
                    for j, (b, beta) in enumerate(fam.params.lower, start=1)
                    if not 2 * b + beta > 0]
        if not fam.entire:
            problems.append(f"not entire: a* = {fam.a_star:g} must lie in (0, 1)")
        raise ParameterError(problems)


def _half_pairs(fam):
    p = fam.params
    upper = tuple((b + beta / 2, beta) for b, beta in p.lower)
    lower = tuple((a + alpha / 2, alpha) for a, alpha in p.upper)
    return upper, lower


def _mixing_half(fam, w, rtol):
    """K int rho(r) r^{-1/2} exp(-w r) dr for an array of complex ``w``."""
    def kern(r):
        with np.errstate(over="ignore", under="ignore"):
            e = np.exp(-np.outer(r, w))
        return np.where(np.isfinite(e), e, 0)

    return fam.K * half_order_integral(fhdensity(fam), kern, rtol=max(rtol, 1e-12))


def donsker_t_transform(fam, pd, rtol=1e-12):
    """T-transform of Donsker's delta at 0 in direction ``eta``, at ``phi``.

    ``Psi'(-w) / (K sqrt(2 pi <eta,eta>))`` where ``Psi'`` has the
    half-shifted pairs ``(b_j + beta_j/2, beta_j)`` over ``(a_i + alpha_i/2,
    alpha_i)`` and ``w = (<phi,phi> - <eta,phi>^2/<eta,eta>)/2``.
    """
    _require(fam)
    pref = 1.0 / (fam.K * math.sqrt(2 * math.pi * pd.eta_eta))
    w = pd.w
    if fam.white_noise:
        return complex(np.exp(-w)) * pref
    upper, lower = _half_pairs(fam)
    val = psi_eval(upper, lower, complex(-w), rtol=rtol,
                   complex_route=lambda z: _mixing_half(fam, -np.asarray(z), rtol))
    return complex(val) * pref


def donsker_expectation(fam, eta_eta):
    """``prod Gamma(b + beta/2) / prod Gamma(a + alpha/2) / (K sqrt(2 pi <eta,eta>))``."""
    _require(fam)
    if not eta_eta > 0:
        raise DomainError("donsker_expectation: <eta,eta> must be > 0")
    upper, lower = _half_pairs(fam)
    ratio = float(np.exp(gamma_ratio_log([u for u, _ in upper], [l for l, _ in lower])))
    return ratio / (fam.K * math.sqrt(2 * math.pi * eta_eta))


def donsker_at_a(fam, eta_eta, a, route="mixture", rtol=1e-8):
    """Generalized expectation of ``delta_a(<., eta>)``.

    ``route="mixture"``: ``int rho(r) (2 pi r <eta,eta>)^{-1/2}
    exp(-a^2/(2 r <eta,eta>)) dr``. ``route="foxh"``: the equivalent
    ``H^{m+1,0}_{p,m+1}`` at ``a^2 / (2 <eta,eta>)`` (``a != 0``).
    """
    _require(fam)
    if not eta_eta > 0:
        raise DomainError("donsker_at_a: <eta,eta> must be > 0")
    pref = 1.0 / math.sqrt(2 * math.pi * eta_eta)
    u = a * a / (2 * eta_eta)
    if fam.white_noise:
        return pref * math.exp(-u)
    if route == "mixture":
        def kern(r):
            with np.errstate(under="ignore"):
                return np.exp(-u / r)

        return pref * float(half_order_integral(fhdensity(fam), kern, rtol=rtol))
    if route == "foxh":
        if u == 0:
            return donsker_expectation(fam, eta_eta)
        p = fam.params
        params = FoxHParams(m=p.m + 1, n=0, p=p.p, q=p.m + 1,
                            upper=tuple((a_ + al / 2, al) for a_, al in p.upper),
                            lower=((0.0, 1.0),) + tuple((b + be / 2, be) for b, be in p.lower))
        return pref * float(foxh_eval(params, u, rtol=min(rtol, 1e-10))) / fam.K
    raise ValueError(f"donsker_at_a: unknown route {route!r}")


def integrability_bound(fam, M, eta_eta, rtol=1e-8):
    """``sqrt(2 pi/<eta,eta>) int H(r) r^{-1/2} exp(M^2 r/2) dr``.

    Bounds ``int |Psi(-z(x))| dx`` for every ``phi`` with ``|phi| < M``.
    """
    _require(fam)
    if not (M > 0 and eta_eta > 0):
        raise DomainError("integrability_bound: need M > 0 and <eta,eta> > 0")
    pref = math.sqrt(2 * math.pi / eta_eta)
    if fam.white_noise:
        return pref * math.exp(M * M / 2)
    try:
        val = _mixing_half(fam, np.array([-M * M / 2 + 0j]), rtol)[0].real
    except ConvergenceError as exc:
        raise ConvergenceError(f"integrability_bound: bound not finite at M = {M:g}") from exc
    if not np.isfinite(val):
        raise ConvergenceError(f"integrability_bound: bound not finite at M = {M:g}")
    return pref * val


def integrability_lhs(fam, pd, rtol=1e-6):
    """``int_R |Psi(-z(x))| dx`` with ``z = x^2<eta,eta>/2 + <phi,phi>/2 + x<eta,phi>``."""
    from .wright import family_psi

    def f(x):
        z = x * x * pd.eta_eta / 2 + pd.phi_phi / 2 + x * pd.eta_phi
        return np.abs(family_psi(fam, -z, rtol=1e-10))

    return float(integrate(f, -np.inf, np.inf, rtol=rtol).value)


def donsker_report(fam, pd, M=1.0):
    """CLI-facing summary."""
    t = donsker_t_transform(fam, pd)
    return {
        "t_transform_re": t.real,
        "t_transform_im": t.imag,
        "expectation": donsker_expectation(fam, pd.eta_eta),
        "bound": integrability_bound(fam, M, pd.eta_eta),
    }
