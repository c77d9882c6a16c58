import math

import numpy as np
import pytest
from numpy.polynomial import hermite_e

from _frozen import ML05_MOMENTS
from gwright.errors import ConditioningError, DomainError
from gwright.gwm import gwmeasure
from gwright.polys import (PolyCoeffs, fox_hermite, fox_hermite_gen, gram_schmidt_orthopoly,
                           recurrence_coefficients)


def test_gaussian_is_hermite(gaussian):
    for n in range(9):
        ref = hermite_e.herme2poly([0] * n + [1])
        np.testing.assert_allclose(fox_hermite(gaussian, n).coeffs, ref, rtol=1e-14)


def test_ml05_low_degree(ml05):
    m1 = ML05_MOMENTS[1]
    assert fox_hermite(ml05, 2).coeffs == pytest.approx((-m1, 0.0, 1.0), rel=1e-14)
    assert fox_hermite(ml05, 3).coeffs == pytest.approx((0.0, -3 * m1, 0.0, 1.0), rel=1e-14)


def test_derivative_identity(ml09):
    for n in range(1, 13):
        d = fox_hermite(ml09, n).derivative().coeffs
        ref = [n * c for c in fox_hermite(ml09, n - 1).coeffs]
        np.testing.assert_allclose(d, ref, rtol=1e-12, atol=0)


def test_generating_function(ml05):
    partial, closed = fox_hermite_gen(ml05, 0.7, 0.4, 40)
    assert partial == pytest.approx(closed, rel=1e-12)


def test_poly_helpers():
    p = PolyCoeffs((1.0, 2.0, 3.0))
    assert p.degree == 2 and p(2.0) == 17.0
    assert p.derivative().coeffs == (2.0, 6.0)
    assert PolyCoeffs((5.0,)).derivative().coeffs == (0.0,)
    assert p.to_json() == "[1.0, 2.0, 3.0]"
    with pytest.raises(DomainError):
        fox_hermite(None, -1)


def test_recurrence_gaussian():
    # N(0,1): alpha = 0, beta_k = k (beta_0 = 1)
    moments = [0 if j % 2 else math.prod(range(1, j, 2)) for j in range(12)]
    a, b = recurrence_coefficients(moments, 6)
    np.testing.assert_allclose(a, 0, atol=1e-12)
    np.testing.assert_allclose(b, [1, 1, 2, 3, 4, 5], rtol=1e-12)


def test_recurrence_singular():
    # two-point measure: the third recurrence coefficient vanishes
    moments = [1, 0, 1, 0, 1, 0, 1, 0]
    with pytest.raises(ConditioningError):
        recurrence_coefficients(moments, 4)


def test_gram_schmidt_low_degrees(ml05):
    g = gwmeasure(ml05, 1)
    m2, m4 = g.mixed_moment((2,)), g.mixed_moment((4,))
    assert gram_schmidt_orthopoly(g, 0).coeffs == (1.0,)
    assert gram_schmidt_orthopoly(g, 1).coeffs == pytest.approx((0.0, 1.0))
    assert gram_schmidt_orthopoly(g, 2).coeffs == pytest.approx((-m2, 0.0, 1.0), rel=1e-12)
    assert gram_schmidt_orthopoly(g, 3).coeffs == pytest.approx((0.0, -m4 / m2, 0.0, 1.0),
                                                                rel=1e-12)
    with pytest.raises(DomainError):
        gram_schmidt_orthopoly(gwmeasure(ml05, 2), 2)


def test_gram_schmidt_gaussian_is_hermite(gaussian):
    g = gwmeasure(gaussian, 1)
    for n in range(6):
        np.testing.assert_allclose(gram_schmidt_orthopoly(g, n).coeffs,
                                   hermite_e.herme2poly([0] * n + [1]), atol=1e-12)


def test_fox_hermite_differs_from_orthopoly(ml05):
    # the two families coincide for the Gaussian only
    f3 = fox_hermite(ml05, 3).coeffs
    p3 = gram_schmidt_orthopoly(gwmeasure(ml05, 1), 3).coeffs
    assert f3[1] == pytest.approx(-3.385137501286538, rel=1e-12)
    assert p3[1] == pytest.approx(-5.317361552716548, rel=1e-10)
