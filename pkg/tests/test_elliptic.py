import math

import numpy as np
import pytest

from holecap.elliptic import (
    focal_distance,
    xi_bar,
    Ck,
    Dk,
    Ek,
    Qk,
    exterior_energy_closed_form,
    interior_energy_closed_form,
    angular_energy,
    hole_fourier_coefficients,
    rotated_leading,
    ellipse_energy
)
from holecap.errors import CircleDegenerateError, InvalidGeometryError
from holecap.geometry import make_ellipse
from holecap.series import leading_energy
from holecap.taylor import HarmonicLeading, harmonic_pair


A, B = 0.75, 0.5
THETAS = [0., math.pi / 10, math.pi / 4, 7. * math.pi / 20, math.pi / 2]


def test_elliptic_radius():
    assert focal_distance(3., 2.) == pytest.approx(math.sqrt(5.))
    assert xi_bar(3., 2.) == pytest.approx(0.5 * math.log(5.))
    assert xi_bar(5., 3.) == pytest.approx(math.log(2.))
    c = focal_distance(3., 2.)
    assert c * math.sinh(xi_bar(3., 2.)) == pytest.approx(2.)

    with pytest.raises(CircleDegenerateError):
        xi_bar(1., 1.)

    with pytest.raises(InvalidGeometryError):
        xi_bar(1., 2.)


def test_constants():
    assert Ck(1) == pytest.approx(1.)
    assert Ck(2) == pytest.approx(0.5)
    assert Dk(2, 0.3) == pytest.approx(math.cosh(1.2) / 4.)

    with pytest.raises(ValueError):
        Ck(0)


@pytest.mark.parametrize('k', [1, 2, 3, 4])
@pytest.mark.parametrize('a, b', [(3., 2.), (0.75, 0.5), (5., 1.)])
def test_q_is_polynomial_form_of_e(k, a, b):
    c = focal_distance(a, b)
    assert Qk(k, a, b) == pytest.approx(c ** (2 * k) * Ek(k, xi_bar(a, b)), rel=1e-12)


def test_disk_limits():
    assert exterior_energy_closed_form(1, 1., 0.3, 1., 1.) == pytest.approx(math.pi)
    assert interior_energy_closed_form(1, 1., 1., 1.) == pytest.approx(math.pi)
    assert angular_energy(1, 1., 0.3, 1., 1.) == pytest.approx(2. * math.pi)
    assert angular_energy(3, 2., 0.1, 1., 1.) == pytest.approx(6. * math.pi * 4.)


def test_spot_values():
    assert angular_energy(1, 1., 0., A, B) == pytest.approx(20. * math.pi / 32.)
    assert angular_energy(1, 1., math.pi / 2, A, B) == pytest.approx(30. * math.pi / 32.)


@pytest.mark.parametrize('k', [1, 2, 3])
@pytest.mark.parametrize('phi', [0., 0.2, -0.4])
def test_fourier_energy_matches_closed_form(k, phi):
    a, b = 3., 2.
    coeffs = hole_fourier_coefficients(k, 1.3, phi, xi_bar(a, b), focal_distance(a, b))
    assert len(coeffs.a) == len(coeffs.b) == k
    # only modes of the parity of k show up
    for j, (aj, bj) in enumerate(zip(coeffs.a, coeffs.b), start=1):
        if (k + j) % 2:
            assert aj == bj == 0.

    expected = exterior_energy_closed_form(k, 1.3, phi, a, b)
    assert coeffs.energy == pytest.approx(expected, rel=1e-12)


def test_theta_monotonicity():
    grid = np.linspace(0., math.pi / 2, 11)

    up = [angular_energy(1, 1., t, A, B) for t in grid]
    assert all(y > x for x, y in zip(up, up[1:]))

    down = [angular_energy(1, 1., t - math.pi / 2, A, B) for t in grid]
    assert all(y < x for x, y in zip(down, down[1:]))

    hump = [angular_energy(2, 1., t, A, B) for t in grid]
    diffs = np.sign(np.diff(hump))
    turns = np.count_nonzero(diffs[1:] != diffs[:-1])
    assert turns == 1
    assert diffs[0] > 0 and diffs[-1] < 0


def test_rotated_leading_shifts_phi():
    h = rotated_leading(HarmonicLeading(1, 1., 0.), 0.3)
    assert (h.k, h.beta, h.phi) == pytest.approx((1, 1., 0.3))

    # folded back into (-pi/2k, pi/2k]
    h = rotated_leading(HarmonicLeading(1, 1., 0.), math.pi / 2 + 0.2)
    assert h.phi == pytest.approx(-math.pi / 2 + 0.2)
    assert h.beta == pytest.approx(-1.)


@pytest.mark.parametrize('theta', THETAS)
@pytest.mark.parametrize('k', [1, 2])
def test_bem_energy_matches_closed_form(k, theta, memory_guard):
    lead = HarmonicLeading(k, 1., 0.).as_poly()
    energy = leading_energy(make_ellipse(A, B, theta), lead, 256)
    expected = ellipse_energy(lead, A, B, theta)
    assert energy.total == pytest.approx(expected, rel=1e-6)


def test_bem_limit_of_quadratic():
    # x1^2 - x2^2 on the hole boundary carries the constant c^2 / 2
    energy = leading_energy(make_ellipse(A, B), harmonic_pair(2)[0], 256)
    assert energy.limit == pytest.approx((A * A - B * B) / 2., rel=1e-9)
