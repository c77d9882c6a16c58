import math

import numpy as np
import pytest
from scipy.special import erfcx

from _frozen import H20, H20_B
from gwright.errors import DomainError, ParameterError, PrecisionWarning, UnsupportedRegimeError
from gwright.foxh import FoxHParams, foxh_eval, foxh_eval_sector, gwf_via_foxh, kernel

EXP = FoxHParams(m=1, n=0, p=0, q=1, upper=(), lower=((0.0, 1.0),))


def test_exponential():
    x = np.geomspace(1e-3, 200, 25)
    np.testing.assert_allclose(foxh_eval(EXP, x), np.exp(-x), rtol=1e-10, atol=1e-300)


def test_bessel_k_frozen():
    p = FoxHParams(m=2, n=0, p=0, q=2, upper=(), lower=((H20_B[0], 1.0), (H20_B[1], 1.0)))
    x = np.array(list(H20))
    np.testing.assert_allclose(foxh_eval(p, x), list(H20.values()), rtol=1e-10)


def test_half_weight_gaussian():
    # H^{1,0}_{1,1}[x | (1/2,1/2); (0,1)] = exp(-x^2/4)/sqrt(pi)
    p = FoxHParams(m=1, n=0, p=1, q=1, upper=((0.5, 0.5),), lower=((0.0, 1.0),))
    x = np.linspace(0.05, 8, 20)
    np.testing.assert_allclose(foxh_eval(p, x), np.exp(-x * x / 4) / math.sqrt(math.pi),
                               rtol=1e-10, atol=1e-300)


def test_diagnostics():
    res = foxh_eval(EXP, np.array([0.5, 3.0]), diagnostics=True)
    assert res.value.shape == (2,)
    assert np.all(np.abs(res.imag_residual) < 1e-10)
    assert np.all(res.n_nodes > 0) and np.all(res.T > 0)
    assert np.all(res.tail_bound <= 1e-10 * np.abs(res.value) + 1e-300)


def test_explicit_gamma_and_inadmissible_gamma():
    assert foxh_eval(EXP, 2.0, gamma=0.5) == pytest.approx(math.exp(-2), rel=1e-10)
    with pytest.warns(PrecisionWarning):
        v = foxh_eval(EXP, 2.0, gamma=-3.0)
    assert v == pytest.approx(math.exp(-2), rel=1e-10)


def test_params_validation():
    with pytest.raises(ParameterError) as info:
        FoxHParams(m=3, n=0, p=0, q=1, upper=(), lower=((0.0, -1.0),))
    assert len(info.value.problems) == 2


def test_domain_errors():
    with pytest.raises(DomainError):
        foxh_eval(EXP, 0.0)
    with pytest.raises(DomainError):
        foxh_eval(EXP, -1.0)


def test_a_star_non_positive():
    p = FoxHParams(m=0, n=0, p=1, q=1, upper=((0.0, 1.0),), lower=((0.0, 1.0),))
    with pytest.raises(UnsupportedRegimeError):
        foxh_eval(p, 1.0)


def test_kernel_values():
    assert kernel(EXP, 2.0) == pytest.approx(1.0)
    assert kernel(EXP, 3.5) == pytest.approx(math.gamma(3.5), rel=1e-13)


def test_gwf_via_foxh_erfcx():
    s = np.geomspace(1e-3, 1e3, 40)
    np.testing.assert_allclose(gwf_via_foxh([(1, 1)], [(1, 0.5)], s), erfcx(s), rtol=1e-12)
    assert gwf_via_foxh([(1, 1)], [(1, 0.5)], 0.0) == pytest.approx(1.0)


def test_sector_evaluation():
    z = 3.0 * np.exp(0.3j)
    ref = np.exp(-z)
    assert foxh_eval_sector(EXP, z) == pytest.approx(ref, rel=1e-10)
    with pytest.raises(DomainError):
        foxh_eval_sector(EXP, 3.0 * np.exp(1.6j))


def test_needs_positive_numerator_shift():
    with pytest.raises(UnsupportedRegimeError):
        gwf_via_foxh([(-0.5, 1.0)], [(1, 1)], 1.0)
