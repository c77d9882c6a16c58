import math

import numpy as np
import pytest

from _frozen import DONSKER_ML05
from gwright.donsker import (PairingData, check_donsker_params, donsker_at_a,
                             donsker_expectation, donsker_report, donsker_t_transform,
                             integrability_bound, integrability_lhs)
from gwright.errors import DomainError, ParameterError
from gwright.gwm import gwmeasure
from gwright.wright import WrightParams, validate


def test_pairing_data():
    pd = PairingData.from_vectors([1.0, 2.0], [0.5, 0.0], [0.0, 1.0])
    assert pd.eta_eta == 5.0
    assert pd.phi_phi == pytest.approx(0.25 - 1.0)
    assert pd.eta_phi == pytest.approx(0.5 + 2j)
    with pytest.raises(DomainError):
        PairingData(eta_eta=0.0)


def test_check_params(ml05, gamma_family, gaussian):
    assert check_donsker_params(ml05) and check_donsker_params(gaussian)
    assert not check_donsker_params(gamma_family)
    bad = validate(WrightParams(upper=((-0.4, 0.5),), lower=((-0.6, 1.0),)))
    assert bad.entire and not check_donsker_params(bad)
    with pytest.raises(ParameterError, match="2 b_1 \\+ beta_1"):
        donsker_expectation(bad, 1.0)


def test_expectation_ml05(ml05):
    assert donsker_expectation(ml05, 1.0) == pytest.approx(DONSKER_ML05, rel=1e-12)
    assert donsker_expectation(ml05, 4.0) == pytest.approx(DONSKER_ML05 / 2, rel=1e-12)


def test_t_transform_at_zero(ml_family):
    pd = PairingData(eta_eta=2.0)
    t = donsker_t_transform(ml_family, pd)
    assert t == pytest.approx(donsker_expectation(ml_family, 2.0), rel=1e-12)


def test_t_transform_gaussian(gaussian):
    pd = PairingData.from_vectors([1.0, 0.0], [0.3, 0.4], [0.1, 0.0])
    w = pd.w
    ref = np.exp(-w) / math.sqrt(2 * math.pi)
    assert donsker_t_transform(gaussian, pd) == pytest.approx(ref, rel=1e-14)


def test_t_transform_complex_routes_agree(ml09):
    pd = PairingData.from_vectors([1.0, 0.0], [0.3, 2.0], [0.5, 1.5])
    t = donsker_t_transform(ml09, pd)
    from gwright.donsker import _mixing_half
    alt = _mixing_half(ml09, np.array([pd.w]), 1e-12)[0] / math.sqrt(2 * math.pi)
    assert t == pytest.approx(alt / ml09.K, rel=1e-9)


def test_at_a_routes(ml_family):
    for a in (0.3, 1.0, 2.5):
        m = donsker_at_a(ml_family, 1.5, a, route="mixture")
        f = donsker_at_a(ml_family, 1.5, a, route="foxh")
        assert m == pytest.approx(f, rel=1e-8)
    assert donsker_at_a(ml_family, 1.5, 0.0, route="foxh") == donsker_expectation(ml_family, 1.5)
    with pytest.raises(ValueError):
        donsker_at_a(ml_family, 1.0, 1.0, route="nope")


def test_at_a_is_density(ml05):
    g = gwmeasure(ml05, 1)
    assert donsker_at_a(ml05, 1.0, 0.8) == pytest.approx(g.density([0.8]), rel=1e-8)


def test_bound_gaussian(gaussian):
    assert integrability_bound(gaussian, 1.0, 1.0) == pytest.approx(
        math.sqrt(2 * math.pi) * math.exp(0.5))


def test_integrability(ml05):
    b = integrability_bound(ml05, 1.0, 1.0)
    pd = PairingData.from_vectors([1.0, 0.0], [0.5, 0.3], [0.2, -0.4])
    assert integrability_lhs(ml05, pd) <= b
    with pytest.raises(DomainError):
        integrability_bound(ml05, 0.0, 1.0)


def test_report_fields(ml05):
    rep = donsker_report(ml05, PairingData(eta_eta=1.0))
    assert set(rep) == {"t_transform_re", "t_transform_im", "expectation", "bound"}
