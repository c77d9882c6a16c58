import math

import numpy as np
import pytest
from scipy import stats

from _frozen import ML05_MOMENTS, ML09_MOMENTS, MWRIGHT09
from gwright.errors import (ConstructionError, DomainError, StateError,
                            UnsupportedRegimeError)
from gwright.fhdam import FHDensity, fhdensity, half_order_integral, laplace_complex
from gwright.gwm import gwmeasure


def test_ml05_closed_form(ml05):
    tau = np.linspace(0.01, 9, 40)
    ref = np.exp(-tau ** 2 / 4) / math.sqrt(math.pi)
    np.testing.assert_allclose(fhdensity(ml05).density(tau), ref, rtol=1e-10, atol=1e-300)


def test_ml09_frozen(ml09):
    tau = np.array(list(MWRIGHT09))
    np.testing.assert_allclose(fhdensity(ml09).density(tau), list(MWRIGHT09.values()),
                               rtol=1e-10)


def test_gamma_family_density(gamma_family):
    tau = np.array([0.1, 1.0, 7.0, 30.0])
    np.testing.assert_allclose(fhdensity(gamma_family).density(tau), tau * np.exp(-tau),
                               rtol=1e-10)


@pytest.mark.parametrize("name,ref", [("ml05", ML05_MOMENTS), ("ml09", ML09_MOMENTS)])
def test_moments_frozen(name, ref, request):
    rho = fhdensity(request.getfixturevalue(name))
    np.testing.assert_allclose([rho.moment(l) for l in range(len(ref))], ref, rtol=1e-14)


def test_laplace_matches_quadrature(ml_family):
    rho = fhdensity(ml_family)
    s = np.array([0.1, 1.0, 10.0])
    q = rho.expect(lambda t: np.exp(-np.outer(t, s)), rtol=1e-10)
    np.testing.assert_allclose(rho.laplace(s).real, q, rtol=1e-9)


def test_laplace_complex(ml05):
    rho = fhdensity(ml05)
    w = np.array([0.5 + 2j, 3 - 1j])
    from scipy.special import wofz
    # E_{1/2}(-w) = e^{w^2} erfc(w) = wofz(i w)
    np.testing.assert_allclose(laplace_complex(rho, w), wofz(1j * w), rtol=1e-9)


def test_cdf_sf(ml_family):
    rho = fhdensity(ml_family)
    x = np.array([0.2, 0.9, 1.0, 1.4, 3.0])
    cdf, sf = rho.cdf(x), rho.sf(x)
    np.testing.assert_allclose(cdf + sf, 1.0, atol=1e-12)
    from gwright.specfun import integrate
    q = [integrate(rho.density, 0, v, rtol=1e-10).value for v in x[:2]]
    np.testing.assert_allclose(cdf[:2], q, rtol=1e-8)


def test_errors(ml05, gaussian):
    rho = fhdensity(ml05)
    with pytest.raises(DomainError):
        rho.density(0.0)
    with pytest.raises(DomainError):
        rho.moment(-1)
    with pytest.raises(StateError):
        FHDensity(ml05).sample(0, 3)
    with pytest.raises(UnsupportedRegimeError):
        fhdensity(gaussian).density(1.0)


def test_point_mass(gaussian):
    rho = fhdensity(gaussian).build_sampler()
    assert rho.moment(5) == 1.0
    np.testing.assert_array_equal(rho.sample(0, 4), np.ones(4))
    assert rho.cdf(1.0) == 1.0 and rho.cdf(0.99) == 0.0


@pytest.mark.parametrize("name", ["ml05", "ml09", "gamma_family"])
def test_sampler_distribution(name, request):
    fam = request.getfixturevalue(name)
    rho = gwmeasure(fam, 1, build_sampler=True).mixing
    assert rho.nonneg_checked
    t = rho.sample(11, 200_000)
    assert t.min() > 0
    assert rho.grid.cdf_values[0] <= 1e-8
    # the table's CDF against the exact one on a fresh grid
    x = np.quantile(t, [0.01, 0.25, 0.5, 0.75, 0.99])
    emp = np.searchsorted(np.sort(t), x, side="right") / t.size
    se = np.sqrt(emp * (1 - emp) / t.size)
    assert np.all(np.abs(emp - rho.cdf(x)) < 5 * se + 1e-6)
    assert stats.kstest(t[:2000], rho.cdf).pvalue > 1e-4


def test_sampler_rejects_negative_density(ml05, monkeypatch):
    rho = FHDensity(ml05)
    real = rho.raw_density

    def broken(tau, rtol=1e-10):
        v = np.asarray(real(tau, rtol))
        return v - 1e-3 * (np.asarray(tau) > 2)

    monkeypatch.setattr(rho, "raw_density", broken)
    with pytest.raises(ConstructionError, match="not a valid mixing law"):
        rho.build_sampler()


def test_export_cdf_csv(tmp_path, ml05):
    rho = gwmeasure(ml05, 1, build_sampler=True).mixing
    path = tmp_path / "cdf.csv"
    rho.export_cdf_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "node,cdf" and len(lines) == rho.grid.nodes.size + 1
    with pytest.raises(StateError):
        FHDensity(ml05).export_cdf_csv(path)


def test_half_order_integral(ml05):
    # int rho(r) r^{-1/2} dr = E tau^{-1/2} = Gamma(1/2)/Gamma(3/4) for rho = 1/2
    v = half_order_integral(fhdensity(ml05), lambda r: np.ones_like(r), rtol=1e-12)
    assert v == pytest.approx(math.gamma(0.5) / math.gamma(0.75), rel=1e-11)
