"""Fox-Hermite polynomials and orthogonal polynomials of the 1-d measure."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConditioningError, DomainError
from .fhdam import fhdensity
from .wright import family_psi

__all__ = [
    "PolyCoeffs",
    "fox_hermite",
    "fox_hermite_gen",
    "gram_schmidt_orthopoly",
    "recurrence_coefficients",
]


@dataclass(frozen=True)
class PolyCoeffs:
    """Dense coefficients in ascending degree."""

    coeffs: tuple

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(x, self.coeffs)

    def derivative(self):
        if self.degree == 0:
            return PolyCoeffs((0.0,))
        return PolyCoeffs(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def to_json(self):
        return json.dumps([float(c) for c in self.coeffs])


def _double_factorial_odd(k):
    """(2k - 1)!!, with the k = 0 value 1."""
    return math.prod(range(1, 2 * k, 2))


@lru_cache(maxsize=1024)
def fox_hermite(fam, n):
    """Monic Fox-Hermite polynomial of degree ``n``.

    The coefficient of ``x^{n-2k}`` is ``(-1)^k E[tau^k] C(n, 2k) (2k-1)!!``
    where ``E[tau^k]`` is the mixing moment (1 for the Gaussian family, giving
    the Hermite polynomials ``He_n``).
    """
    if n < 0 or int(n) != n:
        raise DomainError(f"fox_hermite: degree must be a non-negative integer, got {n}")
    rho = fhdensity(fam)
    c = [0.0] * (n + 1)
    for k in range(n // 2 + 1):
        integer = math.comb(n, 2 * k) * _double_factorial_odd(k)
        c[n - 2 * k] = (-1) ** k * integer * rho.moment(k)
    return PolyCoeffs(tuple(c))


def fox_hermite_gen(fam, x, t, N):
    """``(sum_{n<=N} t^n F_n(x)/n!, exp(t x) Psi(-t^2/2)/K)``."""
    partial = 0.0
    for n in range(N + 1):
        partial += t ** n * fox_hermite(fam, n)(x) / math.factorial(n)
    closed = math.exp(t * x) * float(np.real(family_psi(fam, -t * t / 2))) / fam.K
    return partial, closed


def recurrence_coefficients(moments, n):
    """Three-term recurrence ``(alpha_k, beta_k)``, k < n, from raw moments.

    Chebyshev's algorithm on ``moments[0..2n-1]``.

    Raises
    ------
    ConditioningError
        When some ``beta_k`` is not positive (numerically singular Hankel matrix).
    """
    m = np.asarray(moments, dtype=float)
    if m.size < 2 * n:
        raise DomainError(f"recurrence_coefficients: need {2 * n} moments, got {m.size}")
    alpha = np.zeros(n)
    beta = np.zeros(n)
    if n == 0:
        return alpha, beta
    prev = np.zeros(2 * n)
    cur = m[:2 * n].copy()
    alpha[0] = m[1] / m[0]
    beta[0] = m[0]
    for k in range(1, n):
        nxt = np.zeros(2 * n)
        for l in range(k, 2 * n - k):
            nxt[l] = cur[l + 1] - alpha[k - 1] * cur[l] - beta[k - 1] * prev[l]
        if not nxt[k] > 0 or not np.isfinite(nxt[k]):
            raise ConditioningError(
                f"recurrence_coefficients: Hankel matrix numerically singular at k = {k}")
        alpha[k] = nxt[k + 1] / nxt[k] - cur[k] / cur[k - 1]
        beta[k] = nxt[k] / cur[k - 1]
        prev, cur = cur, nxt
    return alpha, beta


def gram_schmidt_orthopoly(measure, n):
    """Monic orthogonal polynomial of degree ``n`` in L^2 of a 1-d measure.

    Built from the closed-form moments through the three-term recurrence
    ``P_{k+1} = (x - alpha_k) P_k - beta_k P_{k-1}``; for these symmetric
    measures ``alpha_k = 0``.
    """
    if measure.d != 1:
        raise DomainError("gram_schmidt_orthopoly: needs a 1-dimensional measure")
    if n < 0:
        raise DomainError("gram_schmidt_orthopoly: degree must be >= 0")
    moments = [measure.mixed_moment((j,)) for j in range(2 * n + 2)]
    alpha, beta = recurrence_coefficients(moments, n + 1)
    p_prev = np.zeros(1)
    p = np.ones(1)
    for k in range(n):
        nxt = np.zeros(k + 2)
        nxt[1:] += p
        nxt[:k + 1] -= alpha[k] * p
        if k > 0:
            nxt[:k] -= beta[k] * p_prev
        p_prev, p = p, nxt
    return PolyCoeffs(tuple(float(c) for c in p))
