import io
import math

import numpy as np
import pytest

from _frozen import GAMMA_D2_AT_HALF
from gwright.errors import DomainError, StateError, UnsupportedRegimeError
from gwright.gwm import CHUNK_ROWS, GWMeasure, gwmeasure, write_samples_csv
from gwright.fhdam import FHDensity
from gwright.wright import family_psi


def test_char_fn_and_laplace(ml05):
    g = gwmeasure(ml05, 2)
    y = np.array([[0.3, 0.4], [1.0, -2.0]])
    ref = family_psi(ml05, -np.sum(y * y, axis=1) / 2).real
    np.testing.assert_allclose(g.char_fn(y), ref)
    assert g.laplace_fn(0.5, [1.0, 0.0]) == pytest.approx(family_psi(ml05, 0.125).real)
    with pytest.raises(DomainError):
        g.char_fn([1.0, 2.0, 3.0])


def test_mixed_moments(ml05):
    g = gwmeasure(ml05, 2)
    m1 = g.mixing.moment(1)
    m2 = g.mixing.moment(2)
    assert g.mixed_moment((0, 0)) == 1.0
    assert g.mixed_moment((1, 2)) == 0.0
    assert g.mixed_moment((2, 0)) == pytest.approx(m1)
    assert g.mixed_moment((2, 2)) == pytest.approx(m2)
    assert g.mixed_moment((4, 0)) == pytest.approx(3 * m2)
    with pytest.raises(DomainError):
        g.mixed_moment((1,))


def test_moment_report(ml09):
    rep = gwmeasure(ml09, 2).moment_report(2)
    assert set(rep) == {"0,0", "0,1", "1,0", "0,2", "1,1", "2,0"}


def test_density_dimension_hypothesis(ml05):
    with pytest.raises(UnsupportedRegimeError, match="2\\(b_1 \\+ beta_1\\)"):
        gwmeasure(ml05, 2).density([0.3, 0.4])
    with pytest.raises(DomainError):
        GWMeasure(gwmeasure(ml05, 1).mixing, 0)


def test_density_routes(ml_family):
    g = gwmeasure(ml_family, 1)
    x = np.array([[0.1], [0.7], [2.5]])
    np.testing.assert_allclose(g.density(x, route="mixture"), g.density(x, route="foxh"),
                               rtol=1e-8)
    with pytest.raises(DomainError):
        g.density([0.0], route="foxh")
    with pytest.raises(ValueError):
        g.density([1.0], route="nope")


def test_density_gaussian(gaussian):
    g = gwmeasure(gaussian, 3)
    x = np.array([0.1, -0.5, 1.0])
    ref = (2 * math.pi) ** -1.5 * math.exp(-x @ x / 2)
    assert g.density(x) == pytest.approx(ref, rel=1e-14)


def test_density_gamma_family_d2(gamma_family):
    g = gwmeasure(gamma_family, 2)
    for route in ("mixture", "foxh"):
        assert g.density([0.3, 0.4], route=route) == pytest.approx(GAMMA_D2_AT_HALF, rel=1e-8)


def test_sample_requires_sampler(ml05):
    g = GWMeasure(FHDensity(ml05), 1)
    with pytest.raises(StateError):
        g.sample_batch(0, 10)


def test_sample_thread_independent(ml05):
    g = gwmeasure(ml05, 2, build_sampler=True)
    n = 2 * CHUNK_ROWS + 17
    a = g.sample_batch(123, n, threads=1)
    b = g.sample_batch(123, n, threads=3)
    assert a.shape == (n, 2)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, g.sample_batch(124, n, threads=1))


def test_samples_csv_format():
    buf = io.StringIO()
    write_samples_csv(np.array([[0.1, 1 / 3], [-2.0, 1e-300]]), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "x1,x2"
    assert lines[1] == "0.10000000000000001,0.33333333333333331"
    assert float(lines[2].split(",")[1]) == 1e-300


def test_t_transform_exp(ml05, gamma_family):
    g = gwmeasure(ml05, 2)
    eta, phi = np.array([1.0, 0.0]), np.array([0.2, 0.1])
    v = g.t_transform_exp(0.5, eta, phi)
    ref = family_psi(ml05, -(0.25 / 2 + phi @ phi / 2 + 0.5 * phi @ eta)).real
    assert v == pytest.approx(ref, rel=1e-12)
    with pytest.raises(UnsupportedRegimeError):
        gwmeasure(gamma_family, 1).t_transform_exp(0.5, [1.0], [0.1])
