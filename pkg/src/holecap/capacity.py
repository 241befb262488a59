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
Fixed hole size ground truth: the Dirichlet problem on the perforated
domain ``Omega \\ eps * omega`` and the two capacities built from it.

The field is represented as

    u(x) = v[dOmega, sigma_o](x) + v[d(eps omega), sigma_i](x) + c

with ``int sigma_o + int sigma_i = 0``.

'''
from __future__ import annotations

import logging

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from holecap.bem import (
    BoundaryGrid,
    PotentialValues,
    make_grid,
    assemble_single_layer,
    assemble_single_layer_normal,
    eval_potentials,
    dense_solve
)
from holecap.errors import (
    DataError,
    ResolutionError,
    DegenerateContourError
)
from holecap.geometry import ParamCurve, scale_about_origin
from holecap.harmonic import operators, check_nested
from holecap.params import SolverParams
from holecap.taylor import (
    Evaluable,
    TaylorPoly2,
    as_evaluable,
    area_integral,
    interior_gradient_energy
)


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TwoBoundarySolution:
    outer: BoundaryGrid
    inner: BoundaryGrid
    sigma_outer: np.ndarray
    sigma_inner: np.ndarray
    constant: float

    @cached_property
    def hole_flux(self) -> np.ndarray:
        '''
        Derivative along the hole's outward normal, taken from the
        perforated domain.

        '''
        cross = assemble_single_layer_normal(self.inner, self.outer) @ self.sigma_outer
        return (
            0.5 * self.sigma_inner +
            operators(self.inner).Wstar @ self.sigma_inner +
            cross
        )

    @cached_property
    def outer_flux(self) -> np.ndarray:
        '''
        Derivative along the outer curve's outward normal, taken from
        inside.

        '''
        cross = assemble_single_layer_normal(self.outer, self.inner) @ self.sigma_inner
        return (
            -0.5 * self.sigma_outer +
            operators(self.outer).Wstar @ self.sigma_outer +
            cross
        )

    @property
    def total_charge(self) -> float:
        return float(
            self.outer.integrate(self.sigma_outer) +
            self.inner.integrate(self.sigma_inner)
        )

    def traces(self) -> tuple[np.ndarray, np.ndarray]:
        '''
        Boundary values on (outer, inner) as reproduced by the densities.

        '''
        oo = operators(self.outer).V @ self.sigma_outer
        ii = operators(self.inner).V @ self.sigma_inner
        oi = assemble_single_layer(self.outer, self.inner) @ self.sigma_inner
        io = assemble_single_layer(self.inner, self.outer) @ self.sigma_outer
        return oo + oi + self.constant, io + ii + self.constant

    def evaluate(self, points, want_gradient: bool = False) -> PotentialValues:
        a = eval_potentials(self.outer, self.sigma_outer, points, 'single', want_gradient)
        b = eval_potentials(self.inner, self.sigma_inner, points, 'single', want_gradient)
        return PotentialValues(
            a.values + b.values + self.constant,
            None if not want_gradient else a.gradients + b.gradients
        )


def _gap(outer: BoundaryGrid, inner: BoundaryGrid) -> float:
    r = inner.points[:, None, :] - outer.points[None, :, :]
    return float(np.sqrt(np.min(np.sum(r ** 2, axis=-1))))


def admissible_grids(
    Omega: ParamCurve,
    hole: ParamCurve,
    params: SolverParams
) -> tuple[BoundaryGrid, BoundaryGrid]:
    '''
    Grids on both curves whose separation is at least ``gap_factor`` node
    spacings, doubling n up to ``max_n``.

    '''
    n = params.n
    while True:
        outer = make_grid(Omega, n)
        inner = make_grid(hole, n)
        gap = _gap(outer, inner)
        need = params.gap_factor * max(outer.spacing, inner.spacing)
        if gap >= need:
            return outer, inner

        if 2 * n > params.max_n:
            raise ResolutionError(
                f'boundary gap {gap:.3e} below {params.gap_factor:g} node spacings '
                f'({need:.3e}) even at n={n}; raise max_n'
            )

        logger.debug(f'gap {gap:.3e} < {need:.3e} at n={n}, doubling')
        n *= 2


def solve_two_boundary_dirichlet(
    outer: BoundaryGrid,
    inner: BoundaryGrid,
    data_outer,
    data_inner,
    *,
    params: SolverParams | None = None
) -> TwoBoundarySolution:
    params = params or SolverParams.default()
    data_outer = np.broadcast_to(np.asarray(data_outer, dtype=float), (outer.n,))
    data_inner = np.broadcast_to(np.asarray(data_inner, dtype=float), (inner.n,))
    if not (np.all(np.isfinite(data_outer)) and np.all(np.isfinite(data_inner))):
        raise DataError('boundary data has non finite values')

    check_nested(outer.curve, inner.curve, require_origin=False)
    gap = _gap(outer, inner)
    need = params.gap_factor * max(outer.spacing, inner.spacing)
    if gap < need:
        raise ResolutionError(
            f'boundary gap {gap:.3e} below {params.gap_factor:g} node spacings '
            f'({need:.3e}); increase n'
        )

    no, ni = outer.n, inner.n
    size = no + ni + 1
    matrix = np.zeros((size, size))
    matrix[:no, :no] = operators(outer).V.matrix
    matrix[:no, no:no + ni] = assemble_single_layer(outer, inner).matrix
    matrix[no:no + ni, :no] = assemble_single_layer(inner, outer).matrix
    matrix[no:no + ni, no:no + ni] = operators(inner).V.matrix
    matrix[:no + ni, -1] = 1.
    matrix[-1, :no] = outer.weights
    matrix[-1, no:no + ni] = inner.weights

    rhs = np.concatenate([data_outer, data_inner, [0.]])
    sol = dense_solve(
        matrix, rhs,
        what='two boundary system', cond_warn=params.cond_warn,
        error=DegenerateContourError
    )
    logger.debug(f'two boundary solve: n_outer={no} n_inner={ni} c={sol[-1]:.6g}')
    return TwoBoundarySolution(
        outer, inner, sol[:no], sol[no:no + ni], float(sol[-1])
    )


def _perforation(
    Omega: ParamCurve,
    omega: ParamCurve,
    eps: float,
    params: SolverParams
) -> tuple[BoundaryGrid, BoundaryGrid]:
    hole = scale_about_origin(omega, eps)
    check_nested(Omega, hole)
    return admissible_grids(Omega, hole, params)


def condenser_capacity(
    Omega: ParamCurve,
    omega: ParamCurve,
    eps: float,
    n: int | None = None,
    *,
    params: SolverParams | None = None
) -> float:
    params = params or SolverParams.default()
    if n is not None:
        params = params.replace(n=n, max_n=max(params.max_n, n))

    outer, inner = _perforation(Omega, omega, eps, params)
    sol = solve_two_boundary_dirichlet(outer, inner, 0., 1., params=params)
    return float(-inner.integrate(sol.hole_flux))


def u_capacity(
    Omega: ParamCurve,
    omega: ParamCurve,
    u: TaylorPoly2 | Evaluable,
    eps: float,
    n: int | None = None,
    *,
    params: SolverParams | None = None
) -> float:
    '''
    Capacity of ``eps * omega`` relative to the datum ``u``: the exterior
    Dirichlet energy from the hole flux plus ``int_{eps omega} |grad u|^2``.

    '''
    params = params or SolverParams.default()
    if n is not None:
        params = params.replace(n=n, max_n=max(params.max_n, n))

    u = as_evaluable(u)
    outer, inner = _perforation(Omega, omega, eps, params)

    data = np.asarray(u(inner.points), dtype=float)
    if not np.all(np.isfinite(data)):
        raise DataError(f'{u!r} is not finite on the hole boundary')

    sol = solve_two_boundary_dirichlet(outer, inner, 0., data, params=params)
    exterior = float(-inner.integrate(sol.hole_flux * data))

    if isinstance(u, TaylorPoly2):
        interior = interior_gradient_energy(u.scale(eps), omega)

    else:
        def grad2(t: np.ndarray) -> np.ndarray:
            g = u.gradient(eps * t)
            return np.sum(g ** 2, axis=-1)

        interior = eps ** 2 * area_integral(grad2, omega, n=params.n)

    logger.debug(f'u capacity eps={eps:g}: exterior {exterior:.17g} interior {interior:.17g}')
    return exterior + interior
