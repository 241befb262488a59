# holecap: capacities of small holes and Dirichlet eigenvalue shifts
# Copyright 2025-eternity holecap contributors

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.

# You should have received a copy of the GNU Affero General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.
'''
Closed form energies for an elliptic hole.

With the hole ``E(a, b)`` (major axis on x1, focal half distance
``c = sqrt(a^2 - b^2)``) and elliptic coordinates

    x1 = c cosh(xi) cos(eta),  x2 = c sinh(xi) sin(eta)

the boundary is ``xi = xi_bar`` and the harmonic leading term
``beta r^k sin(k t + k phi)`` becomes a finite Fourier sum in ``eta``. Its
bounded exterior extension decays mode by mode, which yields the energy
of the extension and of the polynomial inside the hole in closed form.

Sums containing ``e^(m xi_bar) c^k`` are evaluated through
``e^xi_bar = (a + b) / c`` so that everything stays regular at ``a = b``.

'''
from __future__ import annotations

import math
import logging

from typing import NamedTuple

from holecap.errors import CircleDegenerateError, InvalidGeometryError, UsageError
from holecap.taylor import TaylorPoly2, HarmonicLeading, beta_phi


logger = logging.getLogger(__name__)


def _check_axes(a: float, b: float):
    if not (a > 0. and b > 0.):
        raise InvalidGeometryError(f'semi axes must be positive, got a={a!r} b={b!r}')

    if b > a:
        raise InvalidGeometryError(f'expected a >= b, got a={a!r} b={b!r}')


def _check_order(k: int):
    if k < 1:
        raise UsageError(f'vanishing order must be >= 1, got {k}')


def focal_distance(a: float, b: float) -> float:
    _check_axes(a, b)
    return math.sqrt((a - b) * (a + b))


def xi_bar(a: float, b: float) -> float:
    '''
    Elliptic radius of the boundary, ``c sinh(xi_bar) = b``.

    '''
    c = focal_distance(a, b)
    if c == 0.:
        raise CircleDegenerateError(
            f'a = b = {a!r} is a circle, elliptic coordinates degenerate'
        )

    return math.log((a + b) / c)


def Ck(k: int) -> float:
    _check_order(k)
    return sum(
        abs(k - 2 * j) * math.comb(k, j) ** 2 for j in range(k + 1)
    ) / 2 ** (2 * k - 1)


def Dk(k: int, xi: float) -> float:
    _check_order(k)
    return sum(
        abs(k - 2 * j) * math.comb(k, j) ** 2 * math.exp(2 * (k - 2 * j) * xi)
        for j in range(k + 1)
    ) / 2 ** (2 * k)


def Ek(k: int, xi: float) -> float:
    _check_order(k)
    return sum(
        (k - 2 * j) * math.comb(k, j) ** 2 * math.exp(2 * (k - 2 * j) * xi)
        for j in range((k - 1) // 2 + 1)
    ) / 2 ** (2 * k - 1)


def Qk(k: int, a: float, b: float) -> float:
    '''
    ``c^(2k) Ek(k, xi_bar)`` written as a polynomial in ``a`` and ``b``.

    '''
    _check_order(k)
    _check_axes(a, b)
    return sum(
        (k - 2 * j) * math.comb(k, j) ** 2
        * (a * a - b * b) ** (2 * j) * (a + b) ** (2 * (k - 2 * j))
        for j in range((k - 1) // 2 + 1)
    ) / 2 ** (2 * k - 1)


def _c_power_sum(k: int, a: float, b: float, weight) -> float:
    # sum_j weight(j) C(k,j)^2 c^(2k) e^(2(k-2j) xi_bar)
    c2 = (a - b) * (a + b)
    s = a + b
    return sum(
        weight(j) * math.comb(k, j) ** 2 * c2 ** (2 * j) * s ** (2 * k - 4 * j)
        for j in range(k + 1)
    )


def exterior_energy_closed_form(k: int, beta: float, phi: float, a: float, b: float) -> float:
    '''
    Dirichlet energy outside the hole of the bounded harmonic function equal
    to ``beta r^k sin(k t + k phi)`` on its boundary.

    '''
    _check_order(k)
    _check_axes(a, b)
    c2k = ((a - b) * (a + b)) ** k
    d_term = _c_power_sum(k, a, b, lambda j: abs(k - 2 * j)) / 2 ** (2 * k)
    return (
        -0.5 * math.pi * beta ** 2 * c2k * Ck(k) * math.cos(2 * k * phi)
        + math.pi * beta ** 2 * d_term
    )


def interior_energy_closed_form(k: int, beta: float, a: float, b: float) -> float:
    '''
    ``int_hole |grad (beta r^k sin(k t + k phi))|^2``, independent of phi.

    '''
    _check_order(k)
    _check_axes(a, b)
    return math.pi * beta ** 2 * _c_power_sum(k, a, b, lambda j: k - 2 * j) / 2 ** (2 * k)


def angular_energy(k: int, beta: float, phi: float, a: float, b: float) -> float:
    '''
    Leading eigenvalue shift coefficient for a hole ``E(a, b)``, sum of the
    exterior and interior energies:

        -(pi beta^2 c^2k / 2) Ck cos(2 k phi) + pi beta^2 Qk(a, b)

    '''
    _check_order(k)
    _check_axes(a, b)
    c2k = ((a - b) * (a + b)) ** k
    return (
        -0.5 * math.pi * beta ** 2 * c2k * Ck(k) * math.cos(2 * k * phi)
        + math.pi * beta ** 2 * Qk(k, a, b)
    )


class FourierCoefficients(NamedTuple):
    a: tuple[float, ...]
    b: tuple[float, ...]
    energy: float


def hole_fourier_coefficients(
    k: int,
    beta: float,
    phi: float,
    xi: float,
    c: float
) -> FourierCoefficients:
    '''
    Boundary Fourier coefficients ``a_j``, ``b_j`` (``1 <= j <= k``) of the
    leading term in elliptic coordinates and the exterior energy
    ``pi sum j (a_j^2 + b_j^2)`` of its bounded extension.

    '''
    _check_order(k)
    scale = beta * c ** k / 2 ** (k - 1)
    s, co = math.sin(k * phi), math.cos(k * phi)
    a, b = [], []
    for j in range(1, k + 1):
        if (k + j) % 2:
            a.append(0.)
            b.append(0.)
            continue

        binom = math.comb(k, (k + j) // 2)
        a.append(scale * s * binom * math.cosh(j * xi))
        b.append(scale * co * binom * math.sinh(j * xi))

    energy = math.pi * sum(
        j * (aj ** 2 + bj ** 2) for j, (aj, bj) in enumerate(zip(a, b), start=1)
    )
    return FourierCoefficients(tuple(a), tuple(b), energy)


def rotated_leading(leading: TaylorPoly2 | HarmonicLeading, theta: float) -> HarmonicLeading:
    '''
    Normal form of the leading term seen from a hole rotated by ``theta``:
    in the frame where the hole's major axis lies on x1 the angle shifts by
    ``theta`` and is folded back into ``(-pi/2k, pi/2k]``.

    '''
    poly = leading.as_poly() if isinstance(leading, HarmonicLeading) else leading
    return beta_phi(poly.rotate(theta))


def ellipse_energy(
    leading: TaylorPoly2 | HarmonicLeading,
    a: float,
    b: float,
    theta: float = 0.
) -> float:
    '''
    ``angular_energy`` for a hole ``R_theta E(a, b)`` and an arbitrary
    harmonic homogeneous leading term.

    '''
    h = rotated_leading(leading, theta)
    logger.debug(f'ellipse energy k={h.k} beta={h.beta:.6g} phi={h.phi:.6g} theta={theta:g}')
    return angular_energy(h.k, h.beta, h.phi, a, b)
