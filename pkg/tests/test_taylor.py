import math

import numpy as np
import pytest
from hypothesis import (
    given,
    settings,
    strategies as st
)
from scipy.special import i1

from holecap.errors import (
    DegreeError,
    NotHarmonicError,
    ZeroFunctionError,
    UsageError
)
from holecap.geometry import make_circle, make_ellipse
from holecap.taylor import (
    TaylorPoly2,
    AnalyticFunction,
    HarmonicLeading,
    as_evaluable,
    vanishing_order,
    homogeneous_part,
    harmonic_pair,
    is_harmonic,
    beta_phi,
    poly_area_integral,
    interior_gradient_energy,
    area_integral,
    taylor_from_function
)
from holecap._testing import (
    default_max_examples,
    default_test_deadline,
    random_harmonic
)


x1 = TaylorPoly2.from_text('1 0 1')
x2 = TaylorPoly2.from_text('0 1 1')


def test_parse_and_evaluate():
    p = TaylorPoly2.from_text('1 0 1; 0 1 2')
    assert p((1., 1.)) == pytest.approx(3.)
    assert p.degree == 1
    assert TaylorPoly2.from_text(p.as_text()).as_bytes() == p.as_bytes()

    # repeated monomials add up
    q = TaylorPoly2.from_rows([(1, 1, 1.), (1, 1, 2.)])
    assert q((2., 1.)) == pytest.approx(6.)

    with pytest.raises(UsageError):
        TaylorPoly2.from_text('1 0')

    with pytest.raises(DegreeError):
        TaylorPoly2.from_rows([(3, 0, 1.)], degree=2)


def test_arithmetic():
    p = (x1 + x2) * (x1 - x2)
    assert p((3., 2.)) == pytest.approx(5.)
    assert (2. * x1)((1.5, 0.)) == pytest.approx(3.)
    assert p.laplacian().max_abs() == pytest.approx(0.)
    assert (x1 * x1).scale(2.)((1., 0.)) == pytest.approx(4.)


def test_shift_and_rotate():
    p = x1 * x2
    q = p.shift((1., 2.))
    assert q((0., 0.)) == pytest.approx(2.)
    assert q((1., 1.)) == pytest.approx(6.)

    # q(x) = p(R x)
    r = x1.rotate(math.pi / 2)
    assert r((0., 1.)) == pytest.approx(-1.)
    assert r((1., 0.)) == pytest.approx(0., abs=1e-15)


def test_gradient_and_derivative():
    p = TaylorPoly2.from_text('2 1 1')
    assert p.gradient((1., 2.)) == pytest.approx([4., 1.])
    assert p.derivative(2, 1)((5., 5.)) == pytest.approx(2.)
    assert p.derivative(3, 0).max_abs() == 0.


def test_analytic_function_gradient():
    f = AnalyticFunction(lambda x: x[..., 0] ** 2 * x[..., 1], name='x1^2 x2')
    assert f.gradient(np.array([1., 2.])) == pytest.approx([4., 1.], rel=1e-8)
    assert as_evaluable(f) is f
    assert as_evaluable(x1) is x1
    assert as_evaluable(2.)((5., 5.)) == pytest.approx(2.)


def test_vanishing_order():
    p = TaylorPoly2.from_text('1 1 1; 3 0 1')
    assert vanishing_order(p) == 2
    assert homogeneous_part(p, 2)((1., 1.)) == pytest.approx(1.)

    with pytest.raises(ZeroFunctionError):
        vanishing_order(TaylorPoly2.zero(2))

    with pytest.raises(DegreeError):
        homogeneous_part(p, 4)


@pytest.mark.parametrize('k', [1, 2, 3, 4, 6])
def test_harmonic_pair(k):
    re, im = harmonic_pair(k)
    assert is_harmonic(re) and is_harmonic(im)
    z = complex(0.3, -0.7)
    assert re((z.real, z.imag)) == pytest.approx((z ** k).real)
    assert im((z.real, z.imag)) == pytest.approx((z ** k).imag)


@pytest.mark.parametrize(
    'poly, k, beta, phi',
    [
        (x2, 1, 1., 0.),
        (x1, 1, 1., math.pi / 2),
        (-1. * x2, 1, -1., 0.),
        (harmonic_pair(2)[1], 2, 1., 0.),
    ],
    ids=['x2', 'x1', '-x2', 'im-z2']
)
def test_beta_phi(poly, k, beta, phi):
    lead = beta_phi(poly)
    assert lead.k == k
    assert lead.beta == pytest.approx(beta)
    assert lead.phi == pytest.approx(phi)
    assert np.allclose(lead.as_poly().coeffs, poly.coeffs, atol=1e-14)


def test_beta_phi_rejects():
    with pytest.raises(NotHarmonicError):
        beta_phi(x1 * x1)

    with pytest.raises(DegreeError):
        beta_phi(x1 + x1 * x2)

    with pytest.raises(ZeroFunctionError):
        beta_phi(TaylorPoly2.zero(1))


@given(
    rng=st.randoms(use_true_random=False),
    k=st.integers(min_value=1, max_value=4)
)
@settings(max_examples=default_max_examples, deadline=default_test_deadline)
def test_beta_phi_normal_form(rng, k):
    h = random_harmonic(rng, k)
    lead = beta_phi(h)
    assert -math.pi / (2 * k) < lead.phi <= math.pi / (2 * k) + 1e-15
    # polar form reproduces the polynomial on the unit circle
    t = np.linspace(0., 2. * math.pi, 17)
    pts = np.stack([np.cos(t), np.sin(t)], axis=-1)
    assert np.allclose(lead(pts), h(pts), atol=1e-10)

    angle = rng.uniform(-1., 1.)
    rotated = beta_phi(h.rotate(angle))
    assert abs(rotated.beta) == pytest.approx(abs(lead.beta))


def test_harmonic_leading_rotation_shifts_phi():
    lead = beta_phi(x2.rotate(0.3))
    assert lead.phi == pytest.approx(0.3)
    assert HarmonicLeading(1, 1., 0.3)((1., 0.)) == pytest.approx(math.sin(0.3))


def test_area_integrals():
    assert poly_area_integral(TaylorPoly2.constant(1.), make_circle(1.)) == pytest.approx(math.pi)
    assert poly_area_integral(x1 * x1, make_ellipse(3., 2.)) == pytest.approx(13.5 * math.pi)
    assert interior_gradient_energy(x1, make_circle(0.1)) == pytest.approx(0.01 * math.pi)

    value = area_integral(lambda x: np.exp(x[..., 0]), make_circle(1.))
    assert value == pytest.approx(2. * math.pi * i1(1.), rel=1e-9)


def test_taylor_from_function():
    p = taylor_from_function(lambda x: math.exp(x[0]) * math.sin(x[1]), 3)
    assert p.coeffs[0, 1] == pytest.approx(1., abs=1e-7)
    assert p.coeffs[1, 1] == pytest.approx(1., abs=1e-7)
    assert p.coeffs[2, 1] == pytest.approx(0.5, abs=1e-6)
    assert p.coeffs[0, 3] == pytest.approx(-1. / 6., abs=1e-6)
    assert p.coeffs[0, 0] == pytest.approx(0., abs=1e-12)

    with pytest.raises(DegreeError):
        taylor_from_function(lambda x: 0., 5)
