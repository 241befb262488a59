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
Nyström discretization of the planar Laplace layer potentials.

Conventions, with ``S(x) = log|x| / (2 pi)``:

    v[phi](x) =  int phi(y) S(x - y) dsigma_y
    w[psi](x) = -int psi(y) nu(y) . grad S(x - y) dsigma_y
    W[psi]    = trace of w with the principal value kernel
    W*[phi]   =  int phi(y) nu(x) . grad S(x - y) dsigma_y

Interior/exterior limits are ``w = +-psi/2 + W psi`` and
``nu . grad v = -+phi/2 + W* phi`` (upper sign: interior), hence
``W[1] = 1/2`` on any closed curve.

The same-curve single layer uses Kress' splitting of the logarithmic
singularity, every other operator is the plain periodic trapezoid rule.

'''
from __future__ import annotations

import logging
import warnings

from typing import NamedTuple
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg as sla

from holecap.errors import (
    UsageError,
    SingularPointError,
    NearBoundaryError,
    GeometryConflictError,
    IllPosedError,
    NumericValidityError
)
from holecap.geometry import (
    ParamCurve,
    point_normal_speed
)
from holecap.params import (
    default_param_near_factor,
    default_param_cond_warn,
    default_param_max_deriv_order
)


logger = logging.getLogger(__name__)


EVAL_CHUNK_SIZE: int = 1024
_TWO_PI = 2. * np.pi


@dataclass(frozen=True, eq=False)
class BoundaryGrid:
    curve: ParamCurve
    n: int
    t: np.ndarray
    points: np.ndarray
    normals: np.ndarray
    speeds: np.ndarray
    curvatures: np.ndarray
    weights: np.ndarray

    @property
    def dt(self) -> float:
        return _TWO_PI / self.n

    @property
    def spacing(self) -> float:
        '''
        Largest arc length between consecutive nodes.

        '''
        return float(np.max(self.weights))

    @property
    def length(self) -> float:
        return float(np.sum(self.weights))

    def integrate(self, values: np.ndarray) -> np.ndarray:
        return self.weights @ values

    def __repr__(self) -> str:
        return f'BoundaryGrid({self.curve!r}, n={self.n})'


def make_grid(curve: ParamCurve, n: int) -> BoundaryGrid:
    if n < 16 or n % 2:
        raise UsageError(f'grid size must be even and >= 16, got {n}')

    t = curve.nodes(n)
    cp = point_normal_speed(curve, t)
    logger.debug(f'Built grid n={n} on {curve!r}')
    return BoundaryGrid(
        curve=curve,
        n=n,
        t=t,
        points=cp.point,
        normals=cp.normal,
        speeds=cp.speed,
        curvatures=cp.curvature,
        weights=(_TWO_PI / n) * cp.speed
    )


@dataclass(frozen=True, eq=False)
class DenseOperator:
    matrix: np.ndarray
    kind: str
    target: BoundaryGrid | None
    source: BoundaryGrid

    def __post_init__(self):
        rows = self.target.n if self.target is not None else self.matrix.shape[0]
        if self.matrix.shape != (rows, self.source.n):
            raise ValueError(
                f'{self.kind} operator shape {self.matrix.shape} does not '
                f'match grids ({rows}, {self.source.n})'
            )

        if not np.all(np.isfinite(self.matrix)):
            raise NumericValidityError(f'{self.kind} operator has non finite entries')

    def __matmul__(self, density: np.ndarray) -> np.ndarray:
        return self.matrix @ density


def _as_points(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 2:
        raise ValueError(f'expected points with trailing dimension 2, got {x.shape}')

    return x


def fundamental_solution(x) -> np.ndarray | float:
    x = _as_points(x)
    r2 = np.sum(x ** 2, axis=-1)
    if np.any(r2 == 0.):
        raise SingularPointError('S is singular at the origin')

    out = np.log(r2) / (4. * np.pi)
    return float(out) if out.ndim == 0 else out


def deriv_S(
    h: int,
    j: int,
    x,
    *,
    max_order: int = default_param_max_deriv_order
) -> np.ndarray | float:
    '''
    d1^h d2^j S(x). With F(z) = log(z) / (2 pi) one has S = Re F and
    d1^h d2^j S = Re(i^j F^(m)(z)), m = h + j, where
    F^(m) = (-1)^(m-1) (m-1)! / (2 pi z^m) follows from
    F^(m+1) = -m F^(m) / z.

    '''
    if h < 0 or j < 0:
        raise ValueError('derivative orders must be non negative')

    m = h + j
    if m > max_order:
        raise UsageError(f'derivative order {m} above limit {max_order}')

    if m == 0:
        return fundamental_solution(x)

    x = _as_points(x)
    z = x[..., 0] + 1j * x[..., 1]
    if np.any(z == 0.):
        raise SingularPointError('S is singular at the origin')

    f = 1. / (_TWO_PI * z)
    for order in range(1, m):
        f = -order * f / z

    out = np.real((1j ** j) * f)
    return float(out) if out.ndim == 0 else out


def grad_deriv_S(h: int, j: int, x, **kwargs) -> np.ndarray:
    '''
    Gradient of d1^h d2^j S, trailing axis of size 2.

    '''
    return np.stack([
        np.asarray(deriv_S(h + 1, j, x, **kwargs)),
        np.asarray(deriv_S(h, j + 1, x, **kwargs))
    ], axis=-1)


@lru_cache(maxsize=32)
def _kress_weights(n: int) -> np.ndarray:
    '''
    Weights r_k for int log(4 sin^2((t - s)/2)) f(s) ds at offset t - s =
    2 pi k / n.

    '''
    d = _TWO_PI * np.arange(n) / n
    m = np.arange(1, n // 2)
    r = -(4. * np.pi / n) * (np.cos(np.multiply.outer(d, m)) @ (1. / m))
    r -= (4. * np.pi / n ** 2) * np.cos((n // 2) * d)
    r.setflags(write=False)
    return r


def polygons_cross(p: np.ndarray, q: np.ndarray) -> bool:
    a, b = p, np.roll(p, -1, axis=0)
    c, d = q, np.roll(q, -1, axis=0)

    def orient(u, v, w):
        return (
            (v[..., 0] - u[..., 0]) * (w[..., 1] - u[..., 1]) -
            (v[..., 1] - u[..., 1]) * (w[..., 0] - u[..., 0])
        )

    A, B = a[:, None], b[:, None]
    C, D = c[None, :], d[None, :]
    return bool(np.any(
        (orient(A, B, C) * orient(A, B, D) < 0) &
        (orient(C, D, A) * orient(C, D, B) < 0)
    ))


def _pairwise(target_points: np.ndarray, source: BoundaryGrid) -> tuple[np.ndarray, np.ndarray]:
    r = target_points[:, None, :] - source.points[None, :, :]
    return r, np.sum(r ** 2, axis=-1)


def check_disjoint(target: BoundaryGrid, source: BoundaryGrid):
    _, r2 = _pairwise(target.points, source)
    scale = max(target.length, source.length)
    if np.min(r2) <= (1e-9 * scale) ** 2 or polygons_cross(target.points, source.points):
        raise GeometryConflictError(f'{target!r} and {source!r} intersect')


def assemble_single_layer(target: BoundaryGrid, source: BoundaryGrid) -> DenseOperator:
    if target is source:
        n = source.n
        idx = np.arange(n)
        offset = np.subtract.outer(idx, idx) % n
        R = _kress_weights(n)[offset]

        _, r2 = _pairwise(source.points, source)
        sin2 = 4. * np.sin(0.5 * (source.t[:, None] - source.t[None, :])) ** 2
        np.fill_diagonal(sin2, 1.)
        np.fill_diagonal(r2, 1.)
        L = np.log(r2 / sin2) / (4. * np.pi)
        np.fill_diagonal(L, np.log(source.speeds) / _TWO_PI)

        matrix = (R / (4. * np.pi) + source.dt * L) * source.speeds[None, :]
        return DenseOperator(matrix, 'V', target, source)

    check_disjoint(target, source)
    _, r2 = _pairwise(target.points, source)
    matrix = np.log(r2) / (4. * np.pi) * source.weights[None, :]
    return DenseOperator(matrix, 'V', target, source)


def assemble_dlp_trace(grid: BoundaryGrid) -> DenseOperator:
    r, r2 = _pairwise(grid.points, grid)
    np.fill_diagonal(r2, 1.)
    # nu_y . (y - x) / (2 pi |x - y|^2)
    kernel = -np.einsum('ijk,jk->ij', r, grid.normals) / (_TWO_PI * r2)
    np.fill_diagonal(kernel, grid.curvatures / (4. * np.pi))
    return DenseOperator(kernel * grid.weights[None, :], 'W', grid, grid)


def assemble_dlp_adjoint(grid: BoundaryGrid) -> DenseOperator:
    r, r2 = _pairwise(grid.points, grid)
    np.fill_diagonal(r2, 1.)
    # nu_x . (x - y) / (2 pi |x - y|^2)
    kernel = np.einsum('ijk,ik->ij', r, grid.normals) / (_TWO_PI * r2)
    np.fill_diagonal(kernel, grid.curvatures / (4. * np.pi))
    return DenseOperator(kernel * grid.weights[None, :], 'W*', grid, grid)


def assemble_single_layer_normal(target: BoundaryGrid, source: BoundaryGrid) -> DenseOperator:
    '''
    Normal derivative on ``target`` (along the target normals) of the single
    layer living on a disjoint ``source``.

    '''
    check_disjoint(target, source)
    r, r2 = _pairwise(target.points, source)
    kernel = np.einsum('ijk,ik->ij', r, target.normals) / (_TWO_PI * r2)
    return DenseOperator(kernel * source.weights[None, :], 'dV', target, source)


class PotentialValues(NamedTuple):
    values: np.ndarray
    gradients: np.ndarray | None


def eval_potentials(
    grid: BoundaryGrid,
    density: np.ndarray,
    targets,
    kind: str = 'single',
    want_gradient: bool = False,
    *,
    near_factor: float = default_param_near_factor
) -> PotentialValues:
    '''
    Evaluate the single or double layer potential of ``density`` at points
    away from the curve, chunked over targets.

    '''
    if kind not in ('single', 'double'):
        raise ValueError(f'unknown potential kind {kind!r}')

    targets = _as_points(targets)
    flat = targets.reshape(-1, 2)
    density = np.asarray(density, dtype=float)
    wd = grid.weights * density
    limit = near_factor * grid.spacing

    values = np.empty(len(flat))
    grads = np.empty((len(flat), 2)) if want_gradient else None

    for start in range(0, len(flat), EVAL_CHUNK_SIZE):
        chunk = flat[start:start + EVAL_CHUNK_SIZE]
        r, r2 = _pairwise(chunk, grid)
        closest = np.sqrt(np.min(r2, axis=1))
        if np.any(closest < limit):
            bad = chunk[np.argmin(closest)]
            raise NearBoundaryError(
                f'target {tuple(bad)} is {np.min(closest):.3e} from the boundary, '
                f'below {limit:.3e}; use trace operators or refine the grid'
            )

        sl = slice(start, start + len(chunk))
        if kind == 'single':
            values[sl] = (np.log(r2) / (4. * np.pi)) @ wd
            if want_gradient:
                grads[sl] = np.einsum('ijk,ij,j->ik', r, 1. / (_TWO_PI * r2), wd)

        else:
            nr = np.einsum('ijk,jk->ij', r, grid.normals)
            values[sl] = (-nr / (_TWO_PI * r2)) @ wd
            if want_gradient:
                term = (
                    grid.normals[None, :, :] / r2[..., None] -
                    2. * (nr / r2 ** 2)[..., None] * r
                )
                grads[sl] = -np.einsum('ijk,j->ik', term, wd) / _TWO_PI

    shape = targets.shape[:-1]
    return PotentialValues(
        values.reshape(shape),
        None if grads is None else grads.reshape(shape + (2,))
    )


def dense_solve(
    matrix: np.ndarray,
    rhs: np.ndarray,
    *,
    what: str = 'system',
    cond_warn: float = default_param_cond_warn,
    error: type[NumericValidityError] = IllPosedError
) -> np.ndarray:
    '''
    Pivoted LU solve with a LAPACK reciprocal condition estimate; warns
    above ``cond_warn`` and raises ``error`` on numerically singular input.

    '''
    matrix = np.asarray(matrix, dtype=float)
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', sla.LinAlgWarning)
        lu, piv = sla.lu_factor(matrix)

    anorm = np.linalg.norm(matrix, 1)
    rcond, info = sla.lapack.dgecon(lu, anorm, norm='1')
    if info != 0 or not np.isfinite(rcond) or rcond < 10. * np.finfo(float).eps:
        raise error(f'{what} is numerically singular (rcond={rcond:.3e})')

    if 1. / rcond > cond_warn:
        logger.warning(
            f'{what} is ill conditioned: condition estimate {1. / rcond:.3e}'
        )

    return sla.lu_solve((lu, piv), rhs)
