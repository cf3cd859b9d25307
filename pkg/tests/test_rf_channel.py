import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from rffso.errors import DomainError
from rffso.rf_channel import RfHopParams, cdf_gamma1, exp_terms, mean_gamma1, pdf_gamma1


def test_single_relay_reduces_to_exponential():
    p = RfHopParams(2.0, M=1, m=1, rho_m=0.3)
    g = np.array([0.0, 0.5, 2.0, 7.0])
    assert np.allclose(pdf_gamma1(p, g), 0.5 * np.exp(-g / 2), rtol=1e-13)
    assert cdf_gamma1(p, 2.0) == pytest.approx(1 - math.exp(-1), rel=1e-13)
    assert mean_gamma1(p) == pytest.approx(2.0, rel=1e-14)


def test_pdf_normalised():
    p = RfHopParams(10.0, M=3, m=2, rho_m=0.7)
    val, _ = integrate.quad(lambda g: pdf_gamma1(p, g), 0, np.inf, epsabs=0, epsrel=1e-12)
    assert val == pytest.approx(1.0, abs=1e-8)


def test_pdf_at_zero_is_cdf_slope():
    p = RfHopParams(10.0, M=3, m=2, rho_m=0.7)
    h = 1e-6
    slope = (cdf_gamma1(p, h) - cdf_gamma1(p, 0.0)) / h
    assert slope == pytest.approx(pdf_gamma1(p, 0.0), rel=1e-5, abs=1e-6)


def test_best_of_three_perfect_csi():
    p = RfHopParams(1.0, M=3, m=3, rho_m=1.0)
    assert mean_gamma1(p) == pytest.approx(11.0 / 6.0, rel=1e-12)
    g = np.geomspace(1e-4, 30, 50)
    assert np.allclose(cdf_gamma1(p, g), (1 - np.exp(-g)) ** 3, rtol=0, atol=1e-10)


def test_table2_mean_frozen():
    # oracle: quadrature of g * pdf, frozen
    assert mean_gamma1(RfHopParams(1.0, 3, 3, 0.7)) == pytest.approx(1.5833333333333333, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.data(), st.floats(0.0, 1.0), st.floats(0.1, 1e3))
def test_mean_matches_quadrature(M, data, rho, mu):
    m = data.draw(st.integers(1, M))
    p = RfHopParams(mu, M, m, rho)
    val, _ = integrate.quad(lambda g: g * pdf_gamma1(p, g), 0, np.inf, epsabs=0, epsrel=1e-11, limit=200)
    assert val == pytest.approx(mean_gamma1(p), rel=1e-6)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.data(), st.floats(0.0, 1.0))
def test_cdf_monotone_and_derivative(M, data, rho):
    m = data.draw(st.integers(1, M))
    p = RfHopParams(3.0, M, m, rho)
    g = np.geomspace(1e-3, 60, 200)
    F = cdf_gamma1(p, g)
    assert np.all(np.diff(F) >= -1e-15) and 0 <= F[0] and F[-1] <= 1
    h = g * 1e-5
    fd = (cdf_gamma1(p, g + h) - cdf_gamma1(p, g - h)) / (2 * h)
    pdf = pdf_gamma1(p, g)
    big = pdf > 1e-8
    assert np.allclose(fd[big], pdf[big], rtol=1e-5)


def test_mean_nondecreasing_in_rank():
    means = [mean_gamma1(RfHopParams(1.0, 5, m, 0.6)) for m in range(1, 6)]
    assert all(b >= a for a, b in zip(means, means[1:]))


def test_large_relay_count_no_overflow():
    w, lam, _ = exp_terms(RfHopParams(1.0, 64, 64, 0.9))
    assert np.all(np.isfinite(w)) and np.all(np.isfinite(lam))
    assert cdf_gamma1(RfHopParams(1.0, 64, 64, 0.9), 1e3) == pytest.approx(1.0, abs=1e-9)


def test_cdf_zero_and_limit():
    p = RfHopParams(5.0)
    assert cdf_gamma1(p, 0.0) == 0.0
    assert cdf_gamma1(p, 1e4) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("kw", [dict(mu1=0.0), dict(mu1=1.0, M=2, m=3), dict(mu1=1.0, rho_m=1.2), dict(mu1=1.0, m=0)])
def test_invalid_params(kw):
    with pytest.raises(DomainError):
        RfHopParams(**kw)
