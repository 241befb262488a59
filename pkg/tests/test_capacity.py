import math

import numpy as np
import pytest

from holecap.capacity import (
    admissible_grids,
    solve_two_boundary_dirichlet,
    condenser_capacity,
    u_capacity
)
from holecap.bem import make_grid
from holecap.errors import (
    ResolutionError,
    ContainmentError
)
from holecap.geometry import (
    make_circle,
    make_ellipse,
    rotate,
    scale_about_origin,
    translate
)
from holecap.params import SolverParams
from holecap.elliptic import ellipse_energy
from holecap.harmonic import r0
from holecap.series import leading_energy, leading_capacity
from holecap.spectra import disk_mode, disk_eigenfunction_taylor
from holecap.taylor import TaylorPoly2, AnalyticFunction, homogeneous_part
from holecap.utils import loglog_slope


x1 = TaylorPoly2.from_text('1 0 1')


def disk_dipole_capacity(eps: float, R: float) -> float:
    # datum x1 on the hole of radius eps in B(0, R)
    return 2. * math.pi * eps ** 2 / (1. - (eps / R) ** 2)


@pytest.mark.parametrize(
    'R, eps',
    [(1., 0.1), (2., 0.1), (1., 0.05)],
    ids=['unit-0.1', 'two-0.1', 'unit-0.05']
)
def test_condenser_capacity_annulus(R, eps, memory_guard):
    value = condenser_capacity(make_circle(R), make_circle(1.), eps, 256)
    exact = 2. * math.pi / math.log(R / eps)
    assert value == pytest.approx(exact, rel=1e-8)


def test_condenser_capacity_known_value():
    value = condenser_capacity(make_circle(1.), make_circle(1.), 0.1, 256)
    assert value == pytest.approx(2.728753, abs=1e-6)


@pytest.mark.parametrize('R', [1., 2.])
@pytest.mark.parametrize('eps', [0.2, 0.05])
def test_u_capacity_dipole(R, eps, memory_guard):
    value = u_capacity(make_circle(R), make_circle(1.), x1, eps, 256)
    assert value == pytest.approx(disk_dipole_capacity(eps, R), rel=1e-8)


def test_u_capacity_analytic_datum_matches_polynomial():
    fn = AnalyticFunction(
        lambda x: x[..., 0],
        lambda x: np.broadcast_to([1., 0.], np.shape(x)).copy(),
        name='x1'
    )
    Omega, omega = make_ellipse(3., 2.), make_ellipse(0.75, 0.5, 0.3)
    a = u_capacity(Omega, omega, fn, 0.1, 128)
    b = u_capacity(Omega, omega, x1, 0.1, 128)
    assert a == pytest.approx(b, rel=1e-8)


def test_u_capacity_constant_is_condenser():
    Omega, omega = make_ellipse(3., 2.), make_ellipse(0.75, 0.5)
    a = u_capacity(Omega, omega, TaylorPoly2.constant(1.), 0.05, 128)
    b = condenser_capacity(Omega, omega, 0.05, 128)
    assert a == pytest.approx(b, rel=1e-10)


def test_u_capacity_is_nonnegative():
    Omega, omega = make_ellipse(3., 2.), make_ellipse(0.75, 0.5, 0.7)
    u = TaylorPoly2.from_text('0 0 0.3; 1 1 -2; 0 2 1')
    assert u_capacity(Omega, omega, u, 0.1, 128) > 0.
    assert u_capacity(Omega, omega, TaylorPoly2.zero(2), 0.1, 128) == pytest.approx(0., abs=1e-14)


def test_two_boundary_reciprocity_and_traces():
    outer = make_grid(make_ellipse(3., 2.), 128)
    inner = make_grid(scale_about_origin(make_ellipse(0.75, 0.5, 0.4), 0.2), 128)
    data = inner.points[:, 0] ** 2 - 0.5 * inner.points[:, 1]
    sol = solve_two_boundary_dirichlet(outer, inner, 0., data)

    assert sol.total_charge == pytest.approx(0., abs=1e-12)
    on_outer, on_inner = sol.traces()
    assert np.allclose(on_outer, 0., atol=1e-9)
    assert np.allclose(on_inner, data, atol=1e-9)

    # flux leaving through the outer curve enters through the hole
    out_flux = outer.integrate(sol.outer_flux)
    in_flux = inner.integrate(sol.hole_flux)
    assert out_flux == pytest.approx(in_flux, abs=1e-9)


def test_admissible_grids_refine_and_give_up():
    Omega = make_circle(1.)
    hole = make_circle(0.8)
    params = SolverParams(n=16, max_n=256)
    outer, inner = admissible_grids(Omega, hole, params)
    assert outer.n > 16
    assert outer.n == inner.n

    with pytest.raises(ResolutionError):
        admissible_grids(Omega, make_circle(0.98), SolverParams(n=16, max_n=32))


def test_hole_outside_domain():
    with pytest.raises(ContainmentError):
        condenser_capacity(make_circle(1.), make_circle(1.), 1.5, 64)

    with pytest.raises(ContainmentError):
        u_capacity(make_circle(1.), translate(make_circle(0.1), (2., 0.)), x1, 0.5, 64)


@pytest.mark.parametrize(
    'm, slope_tol',
    [(1, 0.05), (2, 0.1)],
    ids=['dipole-mode', 'quadrupole-mode']
)
def test_scaling_law_for_disk_modes(m, slope_tol, memory_guard):
    theta = math.pi / 5.
    disk = make_circle(1.)
    hole = rotate(make_ellipse(0.75, 0.5), theta)
    u = disk_eigenfunction_taylor(disk_mode(m), (0., 0.), 8)
    lead_poly = homogeneous_part(u, m)

    eps = np.logspace(-2.5, -1., 8)
    caps = [u_capacity(disk, hole, u, e) for e in eps]

    slope, _ = loglog_slope(eps, caps)
    assert slope == pytest.approx(2. * m, abs=slope_tol)

    lead = leading_energy(hole, lead_poly)
    assert lead.k == m
    assert lead.total == pytest.approx(ellipse_energy(lead_poly, 0.75, 0.5, theta), rel=1e-6)

    # fitted constant once the log correction is divided out
    r = r0(disk, hole)
    ratios = [c / leading_capacity(lead, r, e) for c, e in zip(caps, eps)]
    assert math.exp(np.mean(np.log(ratios))) == pytest.approx(1., abs=0.03)
