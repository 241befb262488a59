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
Interior and exterior Dirichlet solvers on a single closed curve, the
equilibrium density, ``r0`` and the logarithmic capacity.

Exterior problems use a single layer plus a constant,

    v[sigma] + c = data on the curve,   int sigma dsigma = 0,

so the field is bounded with limit ``c`` at infinity and its normal
derivative from outside is ``sigma/2 + W* sigma``.

'''
from __future__ import annotations

import logging

from dataclasses import dataclass
from functools import lru_cache, cached_property

import numpy as np

from holecap.bem import (
    BoundaryGrid,
    DenseOperator,
    PotentialValues,
    make_grid,
    assemble_single_layer,
    assemble_dlp_trace,
    assemble_dlp_adjoint,
    eval_potentials,
    fundamental_solution,
    dense_solve,
    polygons_cross
)
from holecap.errors import (
    ContainmentError,
    DegenerateContourError,
    IllPosedError
)
from holecap.geometry import (
    ParamCurve,
    translate,
    centroid,
    winding_contains
)
from holecap.params import (
    default_param_n,
    default_param_cond_warn,
    default_param_equilibrium_tol
)


logger = logging.getLogger(__name__)


class GridOperators:
    '''
    Lazily assembled V, W and W* for one grid.

    '''

    def __init__(self, grid: BoundaryGrid):
        self.grid = grid

    @cached_property
    def V(self) -> DenseOperator:
        return assemble_single_layer(self.grid, self.grid)

    @cached_property
    def W(self) -> DenseOperator:
        return assemble_dlp_trace(self.grid)

    @cached_property
    def Wstar(self) -> DenseOperator:
        return assemble_dlp_adjoint(self.grid)


@lru_cache(maxsize=16)
def operators(grid: BoundaryGrid) -> GridOperators:
    return GridOperators(grid)


def bordered(block: np.ndarray, column: np.ndarray, row: np.ndarray) -> np.ndarray:
    n = block.shape[0]
    out = np.zeros((n + 1, n + 1))
    out[:n, :n] = block
    out[:n, n] = column
    out[n, :n] = row
    return out


@dataclass(frozen=True, eq=False)
class ExteriorSolution:
    grid: BoundaryGrid
    density: np.ndarray
    constant: float
    data: np.ndarray

    @cached_property
    def normal_derivative(self) -> np.ndarray:
        '''
        Derivative along the curve's outward normal, taken from outside.

        '''
        return 0.5 * self.density + operators(self.grid).Wstar @ self.density

    @property
    def limit(self) -> float:
        return self.constant

    def energy(self) -> float:
        '''
        Dirichlet energy of the field over the unbounded exterior.

        '''
        return float(-self.grid.integrate((self.data - self.constant) * self.normal_derivative))

    def evaluate(self, points, want_gradient: bool = False) -> PotentialValues:
        res = eval_potentials(self.grid, self.density, points, 'single', want_gradient)
        return PotentialValues(res.values + self.constant, res.gradients)


@dataclass(frozen=True, eq=False)
class InteriorSolution:
    grid: BoundaryGrid
    density: np.ndarray

    def evaluate(self, points, want_gradient: bool = False) -> PotentialValues:
        return eval_potentials(self.grid, self.density, points, 'double', want_gradient)


def solve_interior_dirichlet(
    grid: BoundaryGrid,
    data: np.ndarray,
    *,
    cond_warn: float = default_param_cond_warn
) -> InteriorSolution:
    matrix = 0.5 * np.eye(grid.n) + operators(grid).W.matrix
    density = dense_solve(
        matrix, np.asarray(data, dtype=float),
        what='interior Dirichlet system', cond_warn=cond_warn, error=IllPosedError
    )
    return InteriorSolution(grid, density)


def solve_exterior_bounded(
    grid: BoundaryGrid,
    data: np.ndarray,
    *,
    cond_warn: float = default_param_cond_warn
) -> ExteriorSolution:
    data = np.asarray(data, dtype=float)
    matrix = bordered(operators(grid).V.matrix, np.ones(grid.n), grid.weights)
    rhs = np.append(data, 0.)
    sol = dense_solve(
        matrix, rhs,
        what='exterior bordered system', cond_warn=cond_warn,
        error=DegenerateContourError
    )
    return ExteriorSolution(grid, sol[:-1], float(sol[-1]), data)


def equilibrium_density(
    grid: BoundaryGrid,
    *,
    tol: float = default_param_equilibrium_tol,
    cond_warn: float = default_param_cond_warn
) -> np.ndarray:
    '''
    Null density of (1/2 - W*) normalized to unit integral.

    '''
    matrix = bordered(
        0.5 * np.eye(grid.n) - operators(grid).Wstar.matrix,
        np.ones(grid.n),
        grid.weights
    )
    rhs = np.zeros(grid.n + 1)
    rhs[-1] = 1.
    sol = dense_solve(
        matrix, rhs,
        what='equilibrium system', cond_warn=cond_warn,
        error=DegenerateContourError
    )
    residual = abs(sol[-1]) * grid.length
    if residual > tol:
        raise DegenerateContourError(
            f'equilibrium null space not resolved on {grid!r} '
            f'(multiplier {residual:.3e}), increase n'
        )

    return sol[:-1]


def check_nested(
    Omega: ParamCurve,
    omega: ParamCurve,
    n: int = 128,
    *,
    require_origin: bool = True
):
    if require_origin:
        for curve, name in ((Omega, 'outer'), (omega, 'hole')):
            if not winding_contains(curve, (0., 0.)):
                raise ContainmentError(f'{name} curve does not contain the origin')

    inner = omega.sample(n)
    outer = Omega.sample(4 * n)
    if polygons_cross(inner, outer) or not winding_contains(Omega, inner[0]):
        raise ContainmentError('hole curve is not strictly inside the outer curve')


def r0(
    Omega: ParamCurve,
    omega: ParamCurve,
    n: int = default_param_n,
    *,
    cond_warn: float = default_param_cond_warn
) -> float:
    '''
    lim_{t -> inf} H^i_0(t) - H^o_0(0), where H^i_0 is the bounded exterior
    harmonic extension of S off the hole and H^o_0 the interior one on the
    outer domain.

    '''
    check_nested(Omega, omega)

    inner = make_grid(omega, n)
    outer = make_grid(Omega, n)

    ext = solve_exterior_bounded(
        inner, fundamental_solution(inner.points), cond_warn=cond_warn
    )
    interior = solve_interior_dirichlet(
        outer, fundamental_solution(outer.points), cond_warn=cond_warn
    )
    at_origin = float(interior.evaluate(np.zeros((1, 2))).values[0])
    value = ext.constant - at_origin
    logger.debug(f'r0: limit {ext.constant:.17g}, interior {at_origin:.17g}')
    return value


def log_capacity(
    omega: ParamCurve,
    n: int = default_param_n,
    *,
    cond_warn: float = default_param_cond_warn
) -> float:
    '''
    exp(2 pi lim H^i_0), computed in the frame of the curve's centroid (or
    the origin when the centroid falls outside a non convex curve).

    '''
    shift = centroid(omega)
    if not winding_contains(omega, shift):
        if not winding_contains(omega, (0., 0.)):
            raise ContainmentError('curve contains neither its centroid nor the origin')

        shift = np.zeros(2)

    local = translate(omega, -shift)
    grid = make_grid(local, n)
    ext = solve_exterior_bounded(
        grid, fundamental_solution(grid.points), cond_warn=cond_warn
    )
    return float(np.exp(2. * np.pi * ext.constant))
