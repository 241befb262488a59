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
Taylor coefficients in eps of the four auxiliary densities.

``rho^o_k``/``rho^i_k`` expand the single layer pair that carries the
logarithmic part of the perforated problem, ``theta^o_k``/``theta^i_k`` the
double layer pair that carries the datum. Index conventions used below:

    mono[j][h]    = t1^h t2^(j-h) on the hole grid
    outer.S[j][h] = d1^h d2^(j-h) S on the outer grid (and .grad, .normal)

Every density is stored already multiplied by ``k!``, exactly as the
recursions produce it.

'''
from __future__ import annotations

import math
import logging

from dataclasses import dataclass, field

import numpy as np

from holecap.bem import (
    BoundaryGrid,
    deriv_S,
    grad_deriv_S,
    dense_solve
)
from holecap.errors import (
    ComplexityGuardError,
    ResolutionError,
    UsageError
)
from holecap.harmonic import operators, bordered, equilibrium_density
from holecap.params import SolverParams
from holecap.taylor import TaylorPoly2


logger = logging.getLogger(__name__)


MAX_SERIES_ORDER: int = 6
_MULTIPLIER_WARN = 1e-8


def check_order(K: int, params: SolverParams):
    limit = min(params.max_order, MAX_SERIES_ORDER)
    if K < 0:
        raise UsageError(f'series order must be non negative, got {K}')

    if K > limit:
        raise ComplexityGuardError(f'series order {K} above supported maximum {limit}')


def monomial_table(points: np.ndarray, order: int) -> list[np.ndarray]:
    '''
    ``table[j][h] = x1^h x2^(j-h)`` for ``j <= order``.

    '''
    x1, x2 = points[:, 0], points[:, 1]
    return [
        np.stack([x1 ** h * x2 ** (j - h) for h in range(j + 1)])
        for j in range(order + 1)
    ]


def homogeneous_or_zero(u: TaylorPoly2, k: int) -> TaylorPoly2:
    if k > u.degree:
        return TaylorPoly2.zero(k)

    return TaylorPoly2.from_array(u.homogeneous(k).coeffs, k)


@dataclass(eq=False)
class OuterTables:
    '''
    Derivatives of S sampled on the outer grid, up to total order
    ``order`` (gradients one order higher).

    '''
    grid: BoundaryGrid
    order: int
    max_deriv_order: int
    S: list[np.ndarray] = field(default_factory=list)
    grad: list[np.ndarray] = field(default_factory=list)
    normal: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        x = self.grid.points
        kw = {'max_order': self.max_deriv_order}
        for j in range(self.order + 1):
            self.S.append(np.stack([
                np.asarray(deriv_S(h, j - h, x, **kw)) for h in range(j + 1)
            ]))
            g = np.stack([grad_deriv_S(h, j - h, x, **kw) for h in range(j + 1)])
            self.grad.append(g)
            self.normal.append(np.einsum('hik,ik->hi', g, self.grid.normals))

    def moments(self, density: np.ndarray, j: int, kind: str) -> np.ndarray:
        '''
        ``int density * table[j][h] dsigma`` over the outer curve for every h;
        shape ``(j + 1,)`` for ``S``/``normal`` and ``(j + 1, 2)`` for ``grad``.

        '''
        table = getattr(self, kind)[j]
        if kind == 'grad':
            return np.einsum('hik,i->hk', table, self.grid.weights * density)

        return table @ (self.grid.weights * density)


@dataclass(frozen=True, eq=False)
class DensityCoefficients:
    outer: BoundaryGrid
    inner: BoundaryGrid
    rho_outer: tuple[np.ndarray, ...]
    rho_inner: tuple[np.ndarray, ...]
    theta_outer: tuple[np.ndarray, ...]
    theta_inner: tuple[np.ndarray, ...]
    g: tuple[float, ...]

    @property
    def order(self) -> int:
        return len(self.rho_inner) - 1

    def rho(self) -> list[tuple[np.ndarray, np.ndarray]]:
        return list(zip(self.rho_outer, self.rho_inner))

    def theta(self) -> list[tuple[np.ndarray, np.ndarray]]:
        return list(zip(self.theta_outer, self.theta_inner))


def _solve_bordered(
    block: np.ndarray,
    grid: BoundaryGrid,
    rhs: np.ndarray,
    target: float,
    what: str,
    params: SolverParams
) -> np.ndarray:
    matrix = bordered(block, np.ones(grid.n), grid.weights)
    sol = dense_solve(
        matrix, np.append(rhs, target),
        what=what, cond_warn=params.cond_warn, error=ResolutionError
    )
    multiplier = abs(sol[-1]) * grid.length
    scale = max(float(np.max(np.abs(rhs))), 1.)
    if multiplier > _MULTIPLIER_WARN * scale:
        logger.warning(
            f'{what}: bordered multiplier {multiplier:.3e}, right hand side '
            f'not orthogonal to the kernel; refine the grid'
        )

    return sol[:-1]


def rho_coefficients(
    outer: BoundaryGrid,
    inner: BoundaryGrid,
    K: int,
    *,
    params: SolverParams | None = None,
    tables: OuterTables | None = None
) -> list[tuple[np.ndarray, np.ndarray]]:
    params = params or SolverParams.default()
    check_order(K, params)
    tables = tables or OuterTables(outer, K, params.max_deriv_order)

    mono = monomial_table(inner.points, K)
    inner_block = 0.5 * np.eye(inner.n) - operators(inner).Wstar.matrix
    outer_block = 0.5 * np.eye(outer.n) + operators(outer).Wstar.matrix

    rho_o: list[np.ndarray] = []
    rho_i: list[np.ndarray] = []
    # int rho^i_m s^(h, j-h) and int rho^o_m grad d^(h, j-h) S
    inner_mom: list[list[np.ndarray]] = []
    grad_mom: list[list[np.ndarray]] = []

    for k in range(K + 1):
        rhs = np.zeros(inner.n)
        for j in range(k):
            coef = k * math.comb(k - 1, j) * (-1) ** (j + 1)
            for h in range(j + 1):
                nu_g = inner.normals @ grad_mom[k - 1 - j][j][h]
                rhs += coef * math.comb(j, h) * mono[j][h] * nu_g

        if k == 0:
            ri = equilibrium_density(
                inner, tol=params.equilibrium_tol, cond_warn=params.cond_warn)

        else:
            ri = _solve_bordered(
                inner_block, inner, rhs, 0., f'inner rho system k={k}', params)

        rho_i.append(ri)
        inner_mom.append([mono[j] @ (inner.weights * ri) for j in range(K + 1)])

        rhs = np.zeros(outer.n)
        for j in range(k + 1):
            coef = math.comb(k, j) * (-1) ** (j + 1)
            for h in range(j + 1):
                rhs += (
                    coef * math.comb(j, h) *
                    tables.normal[j][h] * inner_mom[k - j][j][h]
                )

        ro = dense_solve(
            outer_block, rhs,
            what=f'outer rho system k={k}', cond_warn=params.cond_warn,
            error=ResolutionError
        )
        rho_o.append(ro)
        grad_mom.append([tables.moments(ro, j, 'grad') for j in range(K + 1)])
        logger.debug(
            f'rho_{k}: |rho_o| {np.max(np.abs(ro)):.3e}, |rho_i| {np.max(np.abs(ri)):.3e}'
        )

    return list(zip(rho_o, rho_i))


def g_coefficients(
    inner: BoundaryGrid,
    u: TaylorPoly2,
    rho_inner: list[np.ndarray]
) -> list[float]:
    '''
    ``g_k = sum_l int u_#,l rho^i_(k-l) / (k-l)!`` over the hole curve.

    '''
    K = len(rho_inner) - 1
    parts = [homogeneous_or_zero(u, l)(inner.points) for l in range(K + 1)]
    return [
        float(sum(
            inner.integrate(parts[l] * rho_inner[k - l]) / math.factorial(k - l)
            for l in range(k + 1)
        ))
        for k in range(K + 1)
    ]


def theta_coefficients(
    outer: BoundaryGrid,
    inner: BoundaryGrid,
    u: TaylorPoly2,
    K: int,
    rho: list[tuple[np.ndarray, np.ndarray]] | None = None,
    *,
    params: SolverParams | None = None,
    tables: OuterTables | None = None
) -> list[tuple[np.ndarray, np.ndarray]]:
    params = params or SolverParams.default()
    check_order(K, params)
    tables = tables or OuterTables(outer, K, params.max_deriv_order)
    if rho is None:
        rho = rho_coefficients(outer, inner, K, params=params, tables=tables)

    if len(rho) <= K:
        raise ValueError(f'need rho coefficients up to order {K}, got {len(rho) - 1}')

    g = g_coefficients(inner, u, [ri for _, ri in rho[:K + 1]])
    mono = monomial_table(inner.points, K)
    inner_block = 0.5 * np.eye(inner.n) - operators(inner).W.matrix
    outer_block = 0.5 * np.eye(outer.n) + operators(outer).W.matrix

    theta_o = [np.zeros(outer.n)]
    theta_i = [np.zeros(inner.n)]
    # int theta^i_m nu s^(h, j-h) (vectors) and int theta^o_m nu . grad d^(h, j-h) S
    inner_mom = [[np.zeros((j + 1, 2)) for j in range(K + 1)]]
    normal_mom = [[np.zeros(j + 1) for j in range(K + 1)]]

    for k in range(1, K + 1):
        rhs = np.zeros(outer.n)
        for j in range(k - 1):
            coef = k * math.comb(k - 1, j) * (-1) ** (j + 1)
            for h in range(j + 1):
                rhs += coef * math.comb(j, h) * (
                    tables.grad[j][h] @ inner_mom[k - 1 - j][j][h]
                )

        if k == 1:
            to = np.zeros(outer.n)

        else:
            to = dense_solve(
                outer_block, rhs,
                what=f'outer theta system k={k}', cond_warn=params.cond_warn,
                error=ResolutionError
            )

        theta_o.append(to)
        normal_mom.append([tables.moments(to, j, 'normal') for j in range(K + 1)])

        rhs = math.factorial(k) * (homogeneous_or_zero(u, k)(inner.points) - g[k])
        for j in range(k):
            coef = math.comb(k, j) * (-1) ** (j + 1)
            for h in range(j + 1):
                rhs = rhs + coef * math.comb(j, h) * mono[j][h] * normal_mom[k - j][j][h]

        ti = _solve_bordered(
            inner_block, inner, rhs, 0., f'inner theta system k={k}', params
        )
        theta_i.append(ti)
        wn = (inner.weights * ti)[:, None] * inner.normals
        inner_mom.append([
            np.einsum('hi,ik->hk', mono[j], wn) for j in range(K + 1)
        ])
        logger.debug(
            f'theta_{k}: |theta_o| {np.max(np.abs(to)):.3e}, |theta_i| {np.max(np.abs(ti)):.3e}'
        )

    return list(zip(theta_o, theta_i))


def density_coefficients(
    outer: BoundaryGrid,
    inner: BoundaryGrid,
    u: TaylorPoly2,
    K: int,
    *,
    params: SolverParams | None = None,
    tables: OuterTables | None = None
) -> DensityCoefficients:
    params = params or SolverParams.default()
    check_order(K, params)
    tables = tables or OuterTables(outer, K, params.max_deriv_order)
    rho = rho_coefficients(outer, inner, K, params=params, tables=tables)
    theta = theta_coefficients(outer, inner, u, K, rho, params=params, tables=tables)
    g = g_coefficients(inner, u, [ri for _, ri in rho])
    return DensityCoefficients(
        outer=outer,
        inner=inner,
        rho_outer=tuple(ro for ro, _ in rho),
        rho_inner=tuple(ri for _, ri in rho),
        theta_outer=tuple(to for to, _ in theta),
        theta_inner=tuple(ti for _, ti in theta),
        g=tuple(g)
    )
