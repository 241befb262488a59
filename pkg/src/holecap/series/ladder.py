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
Ladder quantities: the exterior fields ``u_m,k`` (datum part) and
``v_m,k`` (logarithmic part) of the rescaled solution, their fluxes
through the hole, the scalar sequences ``g_k``, ``r_k`` and the boundary
functions ``lambda~_(n,l)`` whose integrals are the capacity coefficients.

'''
from __future__ import annotations

import math
import logging

from typing import Iterator
from dataclasses import dataclass

import numpy as np

from holecap.bem import (
    BoundaryGrid,
    eval_potentials
)
from holecap.harmonic import operators, solve_exterior_bounded
from holecap.params import SolverParams
from holecap.taylor import TaylorPoly2, poly_area_integral

from .coefficients import (
    OuterTables,
    DensityCoefficients,
    check_order,
    homogeneous_or_zero
)


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LadderField:
    '''
    ``(poly(t) + sign * layer[density](t)) / k!`` outside the hole, where
    ``layer`` is the single (``v_m,k``) or double (``u_m,k``) layer.

    '''
    k: int
    poly: TaylorPoly2
    grid: BoundaryGrid
    density: np.ndarray
    kind: str
    sign: float

    def __call__(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        layer = eval_potentials(self.grid, self.density, points, self.kind).values
        return (self.poly(points) + self.sign * layer) / math.factorial(self.k)


@dataclass(frozen=True, eq=False)
class LadderCoefficients:
    order: int
    g: tuple[float, ...]
    r: tuple[float, ...]
    u_fields: tuple[LadderField, ...]
    v_fields: tuple[LadderField, ...]
    u_normal: tuple[np.ndarray, ...]
    u_tilde: tuple[np.ndarray, ...]
    v_tilde: tuple[np.ndarray, ...]
    g_tilde: tuple[np.ndarray, ...]
    a_tilde: tuple[np.ndarray, ...]
    lam: tuple[tuple[np.ndarray, ...], ...]
    xi: tuple[float, ...]

    def lambda_(self, n: int, l: int) -> np.ndarray:
        if l > n + 1:
            raise IndexError(f'lambda~_({n},{l}) needs l <= n + 1')

        return self.lam[n][l]


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    '''
    All ordered ways of writing ``total`` as a sum of ``parts`` positive
    integers.

    '''
    if parts == 0:
        if total == 0:
            yield ()

        return

    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def composition_sum(r: list[float] | tuple[float, ...], total: int, parts: int) -> float:
    '''
    ``sum over compositions b of total into parts of prod r[b_h]``.

    '''
    return float(sum(
        math.prod(r[b] for b in beta) for beta in compositions(total, parts)
    ))


def _poly_from_moments(
    k: int,
    top: int,
    moments: list[list[np.ndarray]]
) -> TaylorPoly2:
    '''
    ``sum_{j <= top} C(k,j) (-1)^j sum_h C(j,h) t1^h t2^(j-h) moments[k-j][j][h]``.

    '''
    coeffs = np.zeros((max(top, 0) + 1, max(top, 0) + 1))
    for j in range(top + 1):
        coef = math.comb(k, j) * (-1) ** j
        for h in range(j + 1):
            coeffs[h, j - h] += coef * math.comb(j, h) * moments[k - j][j][h]

    return TaylorPoly2.from_array(coeffs, max(top, 0))


def ladder_coefficients(
    dens: DensityCoefficients,
    u: TaylorPoly2,
    K: int | None = None,
    *,
    params: SolverParams | None = None,
    tables: OuterTables | None = None
) -> LadderCoefficients:
    params = params or SolverParams.default()
    K = dens.order if K is None else K
    check_order(K, params)
    if K > dens.order:
        raise ValueError(f'densities only available up to order {dens.order}')

    outer, inner = dens.outer, dens.inner
    tables = tables or OuterTables(outer, K, params.max_deriv_order)
    Wstar = operators(inner).Wstar
    V = operators(inner).V
    normals = inner.normals
    pts = inner.points

    # int theta^o_m nu . grad d S and int rho^o_m d S over the outer curve
    A = [[tables.moments(dens.theta_outer[m], j, 'normal') for j in range(K + 1)]
         for m in range(K + 1)]
    B = [[tables.moments(dens.rho_outer[m], j, 'S') for j in range(K + 1)]
         for m in range(K + 1)]

    u_fields, v_fields, u_normal, v_tilde, r = [], [], [], [], []
    for k in range(K + 1):
        fact = math.factorial(k)

        P = _poly_from_moments(k, k - 1, A) if k else TaylorPoly2.zero()
        theta = dens.theta_inner[k]
        u_fields.append(LadderField(k, P, inner, theta, 'double', -1.))
        if k == 0:
            u_normal.append(np.zeros(inner.n))

        else:
            # -w[theta] outside the hole, re-solved as a bounded single layer
            trace = 0.5 * theta - operators(inner).W @ theta
            ext = solve_exterior_bounded(inner, trace, cond_warn=params.cond_warn)
            if abs(ext.constant) > 1e-8 * max(np.max(np.abs(trace)), 1.):
                logger.warning(
                    f'double layer re-solve k={k}: limit {ext.constant:.3e} '
                    f'instead of 0'
                )

            flux = np.sum(P.gradient(pts) * normals, axis=-1) + ext.normal_derivative
            u_normal.append(flux / fact)

        Q = _poly_from_moments(k, k, B)
        rho = dens.rho_inner[k]
        v_fields.append(LadderField(k, Q, inner, rho, 'single', 1.))
        flux = np.sum(Q.gradient(pts) * normals, axis=-1) + 0.5 * rho + Wstar @ rho
        v_tilde.append(flux / fact)
        r.append(float(inner.integrate(Q(pts) + V @ rho) / (fact * inner.length)))
        logger.debug(f'ladder k={k}: g={dens.g[k]:.6g} r={r[-1]:.6g}')

    sharp = [homogeneous_or_zero(u, k) for k in range(K + 1)]
    sharp_vals = [s(pts) for s in sharp]

    u_tilde = [
        sum((u_normal[l] * sharp_vals[k - l] for l in range(k + 1)), np.zeros(inner.n))
        for k in range(K + 1)
    ]
    g_tilde = [
        sum((dens.g[l] * sharp_vals[k - l] for l in range(k + 1)), np.zeros(inner.n))
        for k in range(K + 1)
    ]
    a_tilde = [
        sum((g_tilde[n - k] * v_tilde[k] for k in range(n + 1)), np.zeros(inner.n))
        for n in range(K + 1)
    ]

    lam = []
    for n in range(K + 1):
        row = [u_tilde[n], a_tilde[n]]
        for l in range(2, n + 2):
            acc = np.zeros(inner.n)
            for k in range(l - 1, n + 1):
                acc += a_tilde[n - k] * composition_sum(r, k, l - 1)

            row.append((-1) ** (l - 1) * acc)

        lam.append(tuple(row))

    xi = [0., 0.]
    for n in range(2, K + 1):
        total = TaylorPoly2.zero()
        for l in range(n - 1):
            a, b = sharp[l + 1], sharp[n - l - 1]
            total = total + (
                a.derivative(1, 0) * b.derivative(1, 0) +
                a.derivative(0, 1) * b.derivative(0, 1)
            )

        xi.append(poly_area_integral(total, inner.curve))

    return LadderCoefficients(
        order=K,
        g=tuple(dens.g[:K + 1]),
        r=tuple(r),
        u_fields=tuple(u_fields),
        v_fields=tuple(v_fields),
        u_normal=tuple(u_normal),
        u_tilde=tuple(u_tilde),
        v_tilde=tuple(v_tilde),
        g_tilde=tuple(g_tilde),
        a_tilde=tuple(a_tilde),
        lam=tuple(lam),
        xi=tuple(xi[:K + 1])
    )
