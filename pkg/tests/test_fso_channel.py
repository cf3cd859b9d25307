import math

import numpy as np
import pytest
from scipy import integrate

from rffso.errors import DegenerateParametersError, DomainError
from rffso.fso_channel import (
    DetectionParams,
    GeometryParams,
    MalagaParams,
    PointingPathParams,
    cdf_gamma2,
    derive_geometry,
    derive_malaga,
    mixture_weights,
    moment_gamma2,
    path_loss,
    pdf_gamma2,
    pdf_Ia,
)

D = derive_malaga(MalagaParams())


def test_table2_derived_constants():
    assert D.g == pytest.approx(0.4768, abs=1e-12)
    assert D.OmegaP == pytest.approx(2.0352, abs=1e-12)


def test_a1_closed_form():
    # n = 1 term with the n/2 exponent that normalises the density
    al, be = D.alpha, D.beta
    gbo = D.g * be + D.OmegaP
    assert D.a[0] == pytest.approx(gbo**0.5 * (al / be) ** 0.5, rel=1e-13)


def test_mixture_weights_sum_to_one():
    assert mixture_weights(D).sum() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("params", [MalagaParams(), MalagaParams(alpha=2.296, beta=2), MalagaParams(alpha=8.0, beta=3, rho=0.2)])
def test_pdf_Ia_normalised_and_mean(params):
    d = derive_malaga(params)
    pts = [1e-3, 0.1, 1, 5, 20]
    tot = sum(integrate.quad(lambda x: pdf_Ia(d, x), a, b, epsabs=0, epsrel=1e-11, limit=200)[0]
              for a, b in zip([0] + pts, pts + [np.inf]))
    assert tot == pytest.approx(1.0, abs=1e-7)
    mean = sum(integrate.quad(lambda x: x * pdf_Ia(d, x), a, b, epsabs=0, epsrel=1e-11, limit=200)[0]
               for a, b in zip([0] + pts, pts + [np.inf]))
    assert mean == pytest.approx(d.mean_Ia, rel=1e-7)


def test_pdf_Ia_nonnegative_and_domain():
    assert np.all(pdf_Ia(D, np.geomspace(1e-6, 1e2, 200)) >= 0)
    with pytest.raises(DomainError):
        pdf_Ia(D, 0.0)


def test_mean_Ia_matches_first_moment():
    # E[gamma2] = mu * E[h_p I_a] / E[h_p I_a] for r = 1, so the moment at mu = 1 is 1
    pp, det = PointingPathParams(xi=1.3), DetectionParams(1, 1.0)
    assert moment_gamma2(D, pp, det, 1) == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("r", [1, 2])
@pytest.mark.parametrize("xi", [0.2, 0.4, 0.7, 0.9, 6.7])
def test_normalisation_grid(r, xi):
    pp, det = PointingPathParams(xi=xi), DetectionParams(r, 50.0)
    assert moment_gamma2(D, pp, det, 1) == pytest.approx(50.0 if r == 1 else 50.0 * moment_gamma2(D, pp, DetectionParams(2, 1.0), 1), rel=1e-12)
    assert cdf_gamma2(D, pp, det, 1e7) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("r", [1, 2])
def test_pdf_gamma2_integrates_to_one(r):
    pp, det = PointingPathParams(xi=0.7), DetectionParams(r, 10.0)
    edges = [0.0, 1e-4, 1e-2, 1, 10, 100, 1e3, 1e4, 1e6, np.inf]
    tot = sum(integrate.quad(lambda g: pdf_gamma2(D, pp, det, g), a, b, epsabs=1e-13, epsrel=1e-10, limit=200)[0]
              for a, b in zip(edges, edges[1:]))
    assert tot == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("r", [1, 2])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_moments_match_quadrature(r, k):
    pp, det = PointingPathParams(xi=6.7), DetectionParams(r, 3.0)
    edges = [0.0, 1e-2, 1, 10, 100, 1e3, 1e5, np.inf]
    val = sum(integrate.quad(lambda g: g**k * pdf_gamma2(D, pp, det, g), a, b, epsabs=0, epsrel=1e-10, limit=300)[0]
              for a, b in zip(edges, edges[1:]))
    assert val == pytest.approx(moment_gamma2(D, pp, det, k), rel=1e-6)


def test_pdf_positive_on_support():
    pp, det = PointingPathParams(xi=0.9), DetectionParams(2, 100.0)
    g = np.geomspace(1e-4 * 100, 10 * 100, 60)
    assert np.all(pdf_gamma2(D, pp, det, g) > 0)


@pytest.mark.parametrize("r", [1, 2])
def test_cdf_derivative_is_pdf(r):
    pp, det = PointingPathParams(xi=0.9), DetectionParams(r, 100.0)
    g = np.geomspace(1.0, 1e3, 12)
    h = 1e-4 * g
    fd = (cdf_gamma2(D, pp, det, g + h) - cdf_gamma2(D, pp, det, g - h)) / (2 * h)
    assert np.allclose(fd, pdf_gamma2(D, pp, det, g), rtol=1e-4)


def test_cdf_bounds_and_monotone():
    pp, det = PointingPathParams(xi=0.9), DetectionParams(2, 100.0)
    assert cdf_gamma2(D, pp, det, 0.0) == 0.0
    F = cdf_gamma2(D, pp, det, np.geomspace(1e-3, 1e6, 80))
    assert np.all(np.diff(F) >= -1e-12) and F[0] >= 0 and F[-1] <= 1


def test_path_loss_and_geometry():
    assert path_loss(PointingPathParams(sigma_atten=0.1, L=1.0)) == pytest.approx(math.exp(-0.1))
    geo = derive_geometry(GeometryParams())
    assert geo["w_Leq"] == pytest.approx(0.5175, abs=5e-4)
    assert geo["A0"] == pytest.approx(0.0187, abs=5e-4)
    assert geo["xi"] == pytest.approx(0.86, abs=0.01)
    with pytest.raises(DegenerateParametersError):
        derive_geometry(GeometryParams(sigma_s=0.0))


def test_degenerate_and_invalid():
    with pytest.raises(DegenerateParametersError):
        derive_malaga(MalagaParams(rho=1.0))
    with pytest.raises(DomainError):
        MalagaParams(beta=2.5)
    with pytest.raises(DomainError):
        DetectionParams(3, 1.0)
    with pytest.raises(DomainError):
        PointingPathParams(xi=0.0)
