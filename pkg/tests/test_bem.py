import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holecap.bem import (
    make_grid,
    fundamental_solution,
    deriv_S,
    grad_deriv_S,
    eval_potentials,
    dense_solve,
    polygons_cross
)
from holecap.errors import (
    UsageError,
    SingularPointError,
    NearBoundaryError,
    IllPosedError,
    ContainmentError
)
from holecap.geometry import make_circle, make_ellipse, translate
from holecap.taylor import TaylorPoly2
from holecap._testing import (
    default_max_examples,
    default_test_deadline,
    random_density,
    random_harmonic
)
from holecap.harmonic import (
    operators,
    solve_interior_dirichlet,
    solve_exterior_bounded,
    equilibrium_density,
    check_nested,
    r0,
    log_capacity
)


def test_fundamental_solution_and_derivatives():
    assert fundamental_solution((1., 0.)) == pytest.approx(0.)
    assert fundamental_solution((0., math.e)) == pytest.approx(1. / (2. * math.pi))
    assert deriv_S(1, 0, (1., 0.)) == pytest.approx(1. / (2. * math.pi))
    assert deriv_S(0, 1, (0., 2.)) == pytest.approx(1. / (4. * math.pi))
    assert deriv_S(2, 0, (1., 0.)) == pytest.approx(-1. / (2. * math.pi))
    # harmonic: d11 + d22 = 0
    x = np.array([[0.3, -1.2], [2., 0.5]])
    assert np.allclose(deriv_S(2, 0, x) + deriv_S(0, 2, x), 0., atol=1e-14)
    assert grad_deriv_S(0, 0, (1., 0.)) == pytest.approx([1. / (2. * math.pi), 0.])

    with pytest.raises(SingularPointError):
        fundamental_solution((0., 0.))

    with pytest.raises(SingularPointError):
        deriv_S(1, 1, (0., 0.))

    with pytest.raises(UsageError):
        deriv_S(5, 5, (1., 0.))


@pytest.mark.parametrize('n', [15, 8, 33])
def test_grid_size_validation(n):
    with pytest.raises(UsageError):
        make_grid(make_circle(1.), n)


def test_grid_length():
    grid = make_grid(make_circle(2.), 64)
    assert grid.length == pytest.approx(4. * math.pi)
    assert np.allclose(np.hypot(*grid.normals.T), 1.)
    assert np.allclose(grid.normals, grid.points / 2.)


@pytest.mark.parametrize(
    'curve',
    [make_circle(1.), make_ellipse(3., 2.), make_ellipse(0.75, 0.5, 0.4)],
    ids=['circle', 'ellipse', 'rotated']
)
def test_double_layer_of_one(curve):
    grid = make_grid(curve, 128)
    assert np.allclose(operators(grid).W @ np.ones(grid.n), 0.5, atol=1e-10)


def test_single_layer_on_circle():
    R = 2.
    grid = make_grid(make_circle(R), 128)
    assert np.allclose(operators(grid).V @ np.ones(grid.n), R * math.log(R), atol=1e-10)


def test_near_boundary_evaluation_rejected():
    grid = make_grid(make_circle(1.), 64)
    with pytest.raises(NearBoundaryError):
        eval_potentials(grid, np.ones(grid.n), [[0.99, 0.]])


def test_interior_dirichlet_reproduces_harmonic():
    grid = make_grid(make_ellipse(3., 2.), 128)
    data = grid.points[:, 0] * grid.points[:, 1] + grid.points[:, 0]
    sol = solve_interior_dirichlet(grid, data)
    res = sol.evaluate([[0.3, 0.2], [-0.5, 0.4]], want_gradient=True)
    assert res.values == pytest.approx([0.36, -0.7], abs=1e-9)
    assert res.gradients[0] == pytest.approx([1.2, 0.3], abs=1e-8)


def test_exterior_bounded_dipole():
    grid = make_grid(make_circle(1.), 128)
    ext = solve_exterior_bounded(grid, grid.points[:, 0])
    assert ext.limit == pytest.approx(0., abs=1e-12)
    assert ext.energy() == pytest.approx(math.pi, rel=1e-10)
    # the extension is x1 / |x|^2
    value = ext.evaluate([[2., 0.]]).values[0]
    assert value == pytest.approx(0.5, abs=1e-10)

    const = solve_exterior_bounded(grid, np.full(grid.n, 3.))
    assert const.limit == pytest.approx(3.)
    assert const.energy() == pytest.approx(0., abs=1e-10)


def test_equilibrium_density_on_circle():
    grid = make_grid(make_circle(2.), 64)
    sigma = equilibrium_density(grid)
    assert np.allclose(sigma, 1. / (4. * math.pi), atol=1e-10)


@pytest.mark.parametrize(
    'curve, expected',
    [
        (make_circle(0.5), 0.5),
        (make_ellipse(3., 2.), 2.5),
        (translate(make_ellipse(0.75, 0.5, 1.), (5., -2.)), 0.625),
    ],
    ids=['circle', 'ellipse', 'far-ellipse']
)
def test_log_capacity(curve, expected):
    assert log_capacity(curve, 128) == pytest.approx(expected, rel=1e-9)


def test_r0_concentric_disks():
    value = r0(make_circle(1.), make_circle(0.5), 128)
    assert value == pytest.approx(-math.log(2.) / (2. * math.pi), abs=1e-10)


def test_check_nested():
    check_nested(make_ellipse(3., 2.), make_ellipse(0.75, 0.5))

    with pytest.raises(ContainmentError):
        check_nested(make_circle(1.), make_circle(2.))

    with pytest.raises(ContainmentError):
        check_nested(make_circle(1.), translate(make_circle(0.2), (0.5, 0.)))

    check_nested(
        make_circle(1.),
        translate(make_circle(0.2), (0.5, 0.)),
        require_origin=False
    )


def test_dense_solve():
    with pytest.raises(IllPosedError):
        dense_solve(np.ones((3, 3)), np.ones(3))

    x = dense_solve(np.diag([2., 4.]), np.array([1., 1.]))
    assert x == pytest.approx([0.5, 0.25])


def test_polygons_cross():
    a = make_circle(1.).sample(64)
    assert not polygons_cross(a, make_circle(0.5).sample(64))
    assert polygons_cross(a, translate(make_circle(0.5), (1., 0.)).sample(64))


jump_grid = make_grid(make_ellipse(2., 1.), 128)


@given(
    rng=st.randoms(use_true_random=False),
    k=st.integers(min_value=1, max_value=3)
)
@settings(max_examples=default_max_examples, deadline=default_test_deadline)
def test_green_identity_on_trace(rng, k):
    # interior limit of w[f] - V[g] reproduces f = v|boundary, g = dv/dnu
    v = random_harmonic(rng, k) + TaylorPoly2.constant(rng.uniform(-1., 1.))
    grid = jump_grid
    ops = operators(grid)
    f = v(grid.points)
    g = np.einsum('ij,ij->i', v.gradient(grid.points), grid.normals)

    assert np.allclose(ops.V @ g, -0.5 * f + ops.W @ f, atol=1e-8)

    inside = eval_potentials(grid, f, [(0., 0.), (0.5, -0.2)], kind='double').values
    inside -= eval_potentials(grid, g, [(0., 0.), (0.5, -0.2)]).values
    assert np.allclose(inside, v(np.array([(0., 0.), (0.5, -0.2)])), atol=1e-8)

    outside = eval_potentials(grid, f, [(4., 0.), (0., -3.)], kind='double').values
    outside -= eval_potentials(grid, g, [(4., 0.), (0., -3.)]).values
    assert np.allclose(outside, 0., atol=1e-8)


@given(rng=st.randoms(use_true_random=False))
@settings(max_examples=default_max_examples, deadline=default_test_deadline)
def test_double_layer_adjoint(rng):
    grid = jump_grid
    ops = operators(grid)
    psi = random_density(grid, rng)
    phi = random_density(grid, rng)

    lhs = grid.integrate(psi * (ops.W @ phi))
    rhs = grid.integrate(phi * (ops.Wstar @ psi))
    assert lhs == pytest.approx(rhs, abs=1e-10)

    # interior normal derivative of V[phi] carries no flux
    assert grid.integrate(-0.5 * phi + ops.Wstar @ phi) == pytest.approx(0., abs=1e-8)
