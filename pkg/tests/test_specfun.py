import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rffso.errors import AccuracyError, DegenerateParametersError, DomainError, UnsupportedParametersError
from rffso.specfun import (
    FoxH2Spec,
    MeijerGSpec,
    bessel_k,
    delta_vec,
    fox_h_bivariate,
    gaussian_q,
    meijer_g,
    meijer_g_asymptotic,
    meijer_g_small_arg,
)

mp.mp.dps = 30


def mp_meijer(spec, z):
    a, b = spec.a, spec.b
    return float(mp.meijerg([a[: spec.n], a[spec.n:]], [b[: spec.m], b[spec.m:]], z))


def shapes(xi2, alpha, n, r):
    t5 = delta_vec(r, xi2 + 1.0)
    t4 = delta_vec(r, xi2) + delta_vec(r, alpha) + delta_vec(r, float(n)) + [0.0]
    return {
        "pdf": MeijerGSpec.build(3, 0, [xi2 + 1.0], [xi2, alpha, float(n)]),
        "cdf": MeijerGSpec.build(3 * r, 1, [1.0] + t5, t4[:-1] + [0.0]),
        "ccdf": MeijerGSpec.build(3 * r + 1, 0, t5, t4),
        "sep": MeijerGSpec.build(3 * r + 1, 1, [0.5] + t5, t4),
    }


# ---------------------------------------------------------------- delta_vec / Q / K

def test_delta_vec():
    assert delta_vec(1, 3.7) == [3.7]
    assert delta_vec(2, 3.0) == [1.5, 2.0]
    assert np.allclose(delta_vec(2, 0.81), [0.405, 0.905])


def test_gaussian_q_values():
    assert gaussian_q(0.0) == 0.5
    assert gaussian_q(math.inf) == 0.0
    assert math.isclose(gaussian_q(1.0), 0.15865525393145707, rel_tol=1e-14)


@given(st.floats(-8, 8))
def test_gaussian_q_symmetry(x):
    assert abs(gaussian_q(x) + gaussian_q(-x) - 1.0) <= 1e-14


def test_bessel_k_closed_form_and_symmetry():
    ref = math.sqrt(math.pi / 2.0) * math.exp(-1.0)
    assert math.isclose(bessel_k(0.5, 1.0), ref, rel_tol=1e-12)
    assert bessel_k(-0.5, 1.0) == pytest.approx(bessel_k(0.5, 1.0), rel=1e-14)


@pytest.mark.parametrize("nu,x", [(3.2, 2.5), (0.1, 1e-6), (1.3, 700.0), (-2.7, 0.3), (0.0, 5.0)])
def test_bessel_k_vs_mpmath(nu, x):
    assert bessel_k(nu, x) == pytest.approx(float(mp.besselk(nu, x)), rel=1e-10)


def test_bessel_k_errors():
    with pytest.raises(DomainError):
        bessel_k(0.5, 0.0)
    with pytest.raises(Exception):
        bessel_k(400.0, 1e-6)


# ---------------------------------------------------------------- Meijer-G

def test_exp_identity():
    z = np.geomspace(1e-3, 20, 60)
    v = meijer_g(MeijerGSpec.build(1, 0, [], [0.0]), z)
    assert np.max(np.abs(v / np.exp(-z) - 1)) < 1e-10


def test_exp_identity_scalar():
    assert meijer_g(MeijerGSpec.build(1, 0, [], [0.0]), 2.0) == pytest.approx(0.1353352832366127, rel=1e-12)


@pytest.mark.parametrize("nu", [0.1, 0.5, 1.3, 3.2])
def test_bessel_reduction(nu):
    z = np.geomspace(1e-4, 10, 25)
    g = meijer_g(MeijerGSpec.build(2, 0, [], [nu / 2, -nu / 2]), z)
    ref = np.array([2 * bessel_k(nu, 2 * math.sqrt(t)) for t in z])
    assert np.max(np.abs(g / ref - 1)) < 1e-9


@pytest.mark.parametrize("r", [1, 2])
@pytest.mark.parametrize("kind", ["pdf", "cdf", "ccdf", "sep"])
def test_required_shapes_vs_mpmath(r, kind):
    spec = shapes(0.81, 4.2, 3, r)[kind]
    for z in (1e-6, 1e-2, 0.7, 5.0, 40.0):
        assert meijer_g(spec, z) == pytest.approx(mp_meijer(spec, z), rel=1e-8)


def test_table2_pdf_shape_vs_residue_series():
    spec = shapes(0.81, 4.2, 2, 1)["pdf"]
    assert meijer_g(spec, 0.7) == pytest.approx(meijer_g_small_arg(spec, 0.7, terms=None), rel=1e-8)


def test_integer_pole_coincidence_handled():
    # alpha - n integer: coincident poles, contour path still works
    spec = MeijerGSpec.build(3, 0, [1.81], [0.81, 3.0, 1.0])
    assert meijer_g(spec, 0.3) == pytest.approx(mp_meijer(spec, 0.3), rel=1e-8)
    with pytest.raises(DegenerateParametersError):
        meijer_g_small_arg(spec, 0.3)


def test_permutation_invariance():
    a = shapes(0.81, 4.2, 3, 2)["sep"]
    b = MeijerGSpec.build(a.m, a.n, list(a.a), list(reversed(a.b)))
    c = MeijerGSpec.build(3, 0, [0.3], [0.2, 1.1, 0.7, 2.4])
    d = MeijerGSpec.build(3, 0, [0.3], [0.7, 0.2, 1.1, 2.4])
    assert meijer_g(a, 0.4) == pytest.approx(meijer_g(b, 0.4), rel=1e-9)
    assert meijer_g(c, 0.4) == pytest.approx(meijer_g(d, 0.4), rel=1e-9)


def test_vectorised_matches_scalar():
    spec = shapes(0.81, 4.2, 1, 2)["ccdf"]
    z = np.array([1e-5, 0.01, 1.0])
    vec = meijer_g(spec, z)
    assert np.allclose(vec, [meijer_g(spec, t) for t in z], rtol=1e-12, atol=0)


def test_return_error():
    v, e = meijer_g(MeijerGSpec.build(1, 0, [], [0.0]), 1.0, return_error=True)
    assert e < 1e-10 and v == pytest.approx(math.exp(-1), rel=1e-12)


def test_domain_and_unsupported():
    with pytest.raises(DomainError):
        meijer_g(MeijerGSpec.build(1, 0, [], [0.0]), 0.0)
    # a - b a positive integer: Gamma(b - s) and Gamma(1 - a + s) share the pole s = 0.5
    with pytest.raises(UnsupportedParametersError):
        meijer_g(MeijerGSpec.build(1, 1, [1.5], [0.5]), 1.0)


def test_spec_validation():
    with pytest.raises(DomainError):
        MeijerGSpec.build(2, 0, [], [0.0])
    with pytest.raises(DomainError):
        MeijerGSpec(1, 0, 0, 1, (), (0.0, 1.0))


# ---------------------------------------------------------------- residue expansions

def test_small_arg_leading_scaling():
    spec = shapes(0.81, 4.2, 2, 1)["pdf"]
    z1, z2 = 1e-8, 1e-9
    ratio = meijer_g_small_arg(spec, z1) / meijer_g_small_arg(spec, z2)
    assert ratio == pytest.approx(10 ** 0.81, rel=1e-8)
    assert meijer_g_small_arg(spec, 1e-9) == pytest.approx(meijer_g(spec, 1e-9), rel=1e-6)


def test_small_arg_within_one_percent_cdf_shape():
    spec = shapes(0.81, 4.2, 2, 1)["cdf"]
    for z in (1e-3, 1e-4):
        assert meijer_g_small_arg(spec, z, terms=1) == pytest.approx(meijer_g(spec, z), rel=1e-2)


def test_r2_delta_exponents():
    spec = shapes(0.81, 4.2, 1, 2)["cdf"]
    assert 2.1 in spec.b and 2.6 in spec.b


@pytest.mark.parametrize("r", [1, 2])
def test_full_series_vs_contour_small_z(r):
    spec = shapes(0.7**2, 4.2, 3, r)["cdf"]
    z = np.array([1e-2, 1e-3, 1e-5])
    assert np.allclose(meijer_g_small_arg(spec, z, terms=None), meijer_g(spec, z), rtol=1e-6, atol=0)


@pytest.mark.parametrize("kind", ["ccdf", "sep"])
def test_integer_n_shapes_are_degenerate_for_the_series(kind):
    # Delta(r: n) always contains an integer that collides with the trailing 0
    with pytest.raises(DegenerateParametersError):
        meijer_g_small_arg(shapes(0.49, 4.2, 3, 2)[kind], 1e-3, terms=None)


def test_asymptotic_includes_multiple_poles():
    # b = (0.5, 0.5): double pole, residue has a log term
    spec = MeijerGSpec.build(2, 0, [], [0.5, 0.5])
    z = 1e-6
    ref = mp_meijer(spec, z)
    assert meijer_g_asymptotic(spec, z, s_max=3.0) == pytest.approx(ref, rel=1e-8)


def test_asymptotic_kernel_identity():
    # K(s) = 1 leaves the expansion unchanged
    spec = shapes(0.81, 4.2, 2, 1)["ccdf"]
    plain = meijer_g_asymptotic(spec, 1e-4)
    kern = meijer_g_asymptotic(spec, 1e-4, kernel=lambda s: np.ones_like(s))
    assert kern == pytest.approx(plain, rel=1e-12)


# ---------------------------------------------------------------- bivariate Fox-H

def _separable_spec():
    # n1 = 0 decouples the variables: H = G^{1,0}_{0,1}(x) * G^{1,0}_{0,1}(y)
    return FoxH2Spec(n1=0, a1=(), b1=(), m2=1, n2=0, c2=(), d2=((0.0, 1.0),),
                     m3=1, n3=0, c3=(), d3=((0.0, 1.0),))


def test_fox_h_separable_product():
    x, y = 0.7, 1.9
    assert fox_h_bivariate(_separable_spec(), x, y) == pytest.approx(math.exp(-x - y), rel=1e-6)


def test_fox_h_coupled_against_integral():
    # (0;1,1) top couples the variables through Gamma(1 - s - t):
    # H = int_0^inf e^{-u} G(x u) G(y u) du with G = e^{-.} gives 1/(1 + x + y)
    spec = FoxH2Spec(n1=1, a1=((0.0, 1.0, 1.0),), b1=(), m2=1, n2=0, c2=(), d2=((0.0, 1.0),),
                     m3=1, n3=0, c3=(), d3=((0.0, 1.0),))
    for x, y in [(0.3, 0.5), (2.0, 0.1)]:
        assert fox_h_bivariate(spec, x, y) == pytest.approx(1.0 / (1.0 + x + y), rel=1e-6)


def test_fox_h_domain():
    with pytest.raises(DomainError):
        fox_h_bivariate(_separable_spec(), -1.0, 1.0)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.3, 3.0), st.floats(1.5, 8.0), st.integers(1, 5), st.sampled_from([1, 2]),
       st.floats(-3, 0.5))
def test_cdf_shape_vs_residue_series_property(xi, alpha, n, r, log10z):
    spec = shapes(xi * xi, alpha, n, r)["cdf"]
    z = 10.0 ** log10z
    try:
        ref = meijer_g_small_arg(spec, z, terms=None)
    except DegenerateParametersError:
        return
    assert meijer_g(spec, z) == pytest.approx(ref, rel=1e-7)
