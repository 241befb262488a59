import math

import numpy as np
import pytest
from scipy import special

from holecap.errors import (
    UsageError,
    DegreeError,
    DomainError
)
from holecap.spectra import (
    bessel_J,
    bessel_Y,
    bessel_zero,
    disk_mode,
    mode_l2_norm,
    disk_eigenvalues,
    disk_eigenfunction_taylor,
    annulus_cross_product,
    annulus_eigenvalues
)


J01 = 2.404825557695773
J11 = 3.831705970207512


@pytest.mark.parametrize('m', [0, 1, 2, 5])
@pytest.mark.parametrize('n', [1, 2, 3])
def test_bessel_zeros(m, n):
    z = bessel_zero(m, n)
    assert abs(bessel_J(m, z)) <= 1e-12
    if n > 1:
        assert z > bessel_zero(m, n - 1)


def test_bessel_domain():
    assert bessel_J(0, 0.) == 1.
    assert bessel_Y(0, 1.) == pytest.approx(0.08825696421567697)

    with pytest.raises(DomainError):
        bessel_J(0, -1.)

    with pytest.raises(DomainError):
        bessel_Y(1, 0.)

    with pytest.raises(DomainError):
        bessel_J(13, 1.)

    with pytest.raises(UsageError):
        bessel_zero(0, 0)


def test_disk_spectrum_start():
    modes = disk_eigenvalues(1., 6)
    assert modes[0].eigenvalue == pytest.approx(5.78319, abs=1e-5)
    assert modes[0].simple
    assert modes[1].eigenvalue == pytest.approx(14.68197, abs=1e-5)
    assert modes[2].eigenvalue == modes[1].eigenvalue
    assert not modes[1].simple
    assert {modes[1].parity, modes[2].parity} == {'cos', 'sin'}
    assert [m.index for m in modes] == [1, 2, 3, 4, 5, 6]
    values = [m.eigenvalue for m in modes]
    assert values == sorted(values)

    scaled = disk_eigenvalues(2., 6)
    assert [m.eigenvalue for m in scaled] == pytest.approx([v / 4. for v in values])

    with pytest.raises(UsageError):
        disk_eigenvalues(1., 51)

    with pytest.raises(UsageError):
        disk_eigenvalues(0., 3)


@pytest.mark.parametrize(
    'm, n, parity',
    [(0, 1, 'cos'), (1, 1, 'cos'), (1, 1, 'sin'), (2, 1, 'cos'), (0, 2, 'cos'), (3, 2, 'sin')]
)
def test_modes_are_normalized(m, n, parity):
    mode = disk_mode(m, n, 1.5, parity)
    assert mode_l2_norm(mode) == pytest.approx(1., abs=1e-10)


def test_ground_mode_center_value():
    mode = disk_mode(0)
    assert mode((0., 0.)) == pytest.approx(1. / (math.sqrt(math.pi) * special.jv(1, J01)))
    assert mode((0., 0.)) == pytest.approx(1.0868, abs=1e-4)
    assert mode.wavenumber == pytest.approx(J01)


def test_disk_mode_validation():
    with pytest.raises(UsageError):
        disk_mode(0, parity='sin')

    with pytest.raises(UsageError):
        disk_mode(1, parity='tan')

    with pytest.raises(UsageError):
        disk_mode(1, R=-1.)


@pytest.mark.parametrize('m, parity', [(0, 'cos'), (1, 'cos'), (1, 'sin'), (2, 'cos'), (3, 'sin')])
def test_mode_gradient(m, parity):
    mode = disk_mode(m, 1, 1., parity)
    p = np.array([0.31, -0.22])
    h = 1e-5
    fd = [
        (mode(p + h * e) - mode(p - h * e)) / (2. * h)
        for e in np.eye(2)
    ]
    assert mode.gradient(p) == pytest.approx(fd, abs=1e-7)


@pytest.mark.parametrize('m, parity', [(0, 'cos'), (1, 'cos'), (2, 'sin'), (4, 'cos')])
def test_center_taylor_is_exact_series(m, parity):
    mode = disk_mode(m, 1, 1., parity)
    poly = disk_eigenfunction_taylor(mode, (0., 0.), 8)
    for x in ([0.03, 0.02], [-0.04, 0.01], [0., -0.05]):
        assert poly(x) == pytest.approx(mode(np.array(x)), rel=1e-9, abs=1e-15)


def test_center_taylor_leading_terms():
    ground = disk_eigenfunction_taylor(disk_mode(0), (0., 0.), 4)
    assert ground.coeffs[0, 0] == pytest.approx(disk_mode(0)((0., 0.)))

    mode = disk_mode(1)
    poly = disk_eigenfunction_taylor(mode, (0., 0.), 4)
    beta = mode.norm * J11 / 2.
    assert poly.coeffs[1, 0] == pytest.approx(beta)
    assert poly.coeffs[0, 1] == 0.
    assert poly.coeffs[0, 0] == 0.
    assert beta == pytest.approx(3.795, abs=1e-3)


def test_off_center_taylor():
    mode = disk_mode(1, 1, 1., 'sin')
    p = np.array([0.3, 0.2])
    poly = disk_eigenfunction_taylor(mode, p, 4)
    assert poly.coeffs[0, 0] == pytest.approx(mode(p), abs=1e-12)
    grad = mode.gradient(p)
    assert poly.coeffs[1, 0] == pytest.approx(grad[0], abs=1e-7)
    assert poly.coeffs[0, 1] == pytest.approx(grad[1], abs=1e-7)

    with pytest.raises(DegreeError):
        disk_eigenfunction_taylor(mode, (0., 0.), 9)

    with pytest.raises(DomainError):
        disk_eigenfunction_taylor(mode, (1.5, 0.), 4)


def test_annulus_thin_band():
    eps = 0.5
    (lam,) = annulus_eigenvalues(eps, 0, 1)
    band = math.pi ** 2 / (1. - eps) ** 2
    # the radial 1/(4 r^2) term pulls the root slightly below the band
    assert 0.98 * band < lam < band
    assert abs(annulus_cross_product(math.sqrt(lam), eps, 0)) <= 1e-11


def test_annulus_small_hole_approaches_disk():
    (lam,) = annulus_eigenvalues(1e-6, 0, 1)
    shift = lam - J01 ** 2
    predicted = disk_mode(0)((0., 0.)) ** 2 * 2. * math.pi / abs(math.log(1e-6))
    assert shift > 0.
    assert abs(shift - predicted) / shift <= 0.15


def test_annulus_ordering():
    eps = 0.1
    first = annulus_eigenvalues(eps, 0, 3)
    assert list(first) == sorted(first)
    assert annulus_eigenvalues(eps, 1, 1)[0] > first[0]
    assert first[0] > J01 ** 2

    scaled = annulus_eigenvalues(eps, 0, 2, R=2.)
    assert scaled == pytest.approx([v / 4. for v in first[:2]])


@pytest.mark.parametrize('eps', [0., 1e-7, 0.95])
def test_annulus_domain(eps):
    with pytest.raises(DomainError):
        annulus_eigenvalues(eps, 0, 1)
