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
Eigenvalue shifts caused by a small hole ``p + eps * omega`` and the
placement heuristics built on them.

If the L2 normalized eigenfunction ``u`` does not vanish at ``p`` the shift
is logarithmic, ``-u(p)^2 / (log(eps) / 2pi)``. If it vanishes to order
``k`` the shift is ``eps^2k E`` where ``E`` is the energy of the degree
``k`` part of ``u`` relative to the hole. Both are leading order only.

'''
from __future__ import annotations

import math
import logging

from typing import Callable, NamedTuple, Sequence
from dataclasses import dataclass, field

import numpy as np

from holecap.errors import ValidityError, ZeroFunctionError
from holecap.geometry import ParamCurve
from holecap.params import SolverParams
from holecap.series import LeadingEnergy, leading_energy
from holecap.taylor import (
    TaylorPoly2,
    homogeneous_part,
    taylor_from_function
)
from holecap.utils import ordered_map, worker_count


logger = logging.getLogger(__name__)


CLASSIFY_DEGREE: int = 4
_TIE_RTOL = 1e-9
_BOUNDARY_NODES = 1024


class ScalingRegime(NamedTuple):
    k: int
    label: str
    exponent: int | None


def classify_order(u: TaylorPoly2, tol: float) -> int:
    '''
    Vanishing order with a relative threshold: the degree ``j`` part counts
    as zero when its largest coefficient is below ``tol`` times the largest
    one among degrees ``<= 4``.

    '''
    top = min(u.degree, CLASSIFY_DEGREE)
    norms = [u.part_norm(j) for j in range(u.degree + 1)]
    scale = max(norms[:top + 1])
    if scale == 0.:
        scale = max(norms)

    if scale == 0.:
        raise ZeroFunctionError('u vanishes identically near the hole center')

    for j, norm in enumerate(norms):
        if norm > tol * scale:
            return j

    raise ZeroFunctionError(f'no Taylor part of u above {tol:g} relative')


def scaling_exponent(u: TaylorPoly2, tol: float | None = None) -> ScalingRegime:
    tol = SolverParams.default().classify_tol if tol is None else tol
    k = classify_order(u, tol)
    if k == 0:
        return ScalingRegime(0, '1/|log eps|', None)

    return ScalingRegime(k, f'eps^{2 * k}', 2 * k)


@dataclass(frozen=True)
class EigPrediction:
    '''
    Leading order prediction for one eigenvalue and one hole center.
    ``coefficient`` is ``u(p)^2`` in the logarithmic regime and the energy
    ``E`` otherwise.

    '''
    lambda_N: float
    point: tuple[float, float]
    k: int
    coefficient: float
    energy: LeadingEnergy | None = field(default=None, compare=False)

    @property
    def regime(self) -> str:
        return 'log' if self.k == 0 else 'power'

    @property
    def exponent(self) -> int | None:
        return None if self.k == 0 else 2 * self.k

    def shift(self, eps: float) -> float:
        if not 0. < eps < 1.:
            raise ValidityError(f'eps must lie in (0, 1), got {eps!r}')

        if self.k == 0:
            return -self.coefficient / (math.log(eps) / (2. * math.pi))

        return eps ** (2 * self.k) * self.coefficient

    def eigenvalue(self, eps: float) -> float:
        return self.lambda_N + self.shift(eps)

    def as_dict(self, eps: Sequence[float] = ()) -> dict:
        return {
            'lambda_N': self.lambda_N,
            'px': self.point[0],
            'py': self.point[1],
            'k': self.k,
            'regime': self.regime,
            'coefficient': self.coefficient,
            'shifts': [
                {'eps': e, 'shift': self.shift(e), 'eigenvalue': self.eigenvalue(e)}
                for e in eps
            ]
        }


def _check_simple(lambda_N: float, spectrum: Sequence[float] | None, gap_tol: float):
    if not spectrum:
        return

    close = [v for v in spectrum if abs(v - lambda_N) <= gap_tol * max(abs(lambda_N), 1.)]
    if len(close) > 1:
        logger.warning(
            f'eigenvalue {lambda_N:.12g} is not simple ({len(close)} values within '
            f'{gap_tol:g}), the prediction assumes simplicity'
        )


def predict(
    lambda_N: float,
    u_taylor_at_p: TaylorPoly2,
    omega: ParamCurve,
    *,
    point=(0., 0.),
    params: SolverParams | None = None,
    spectrum: Sequence[float] | None = None,
    gap_tol: float = 1e-8
) -> EigPrediction:
    '''
    ``u_taylor_at_p`` is the Taylor polynomial of the eigenfunction in the
    frame translated so that the hole center ``point`` sits at the origin.

    '''
    params = params or SolverParams.default()
    _check_simple(lambda_N, spectrum, gap_tol)

    k = classify_order(u_taylor_at_p, params.classify_tol)
    point = (float(point[0]), float(point[1]))
    if k == 0:
        value = float(u_taylor_at_p.coeffs[0, 0])
        return EigPrediction(lambda_N, point, 0, value ** 2)

    energy = leading_energy(omega, homogeneous_part(u_taylor_at_p, k), params=params)
    if energy.total <= 0.:
        raise ValidityError(f'leading energy {energy.total:.3e} is not positive')

    logger.debug(f'prediction at {point}: k={k} E={energy.total:.12g}')
    return EigPrediction(lambda_N, point, k, energy.total, energy)


def predict_shift(
    lambda_N: float,
    u_taylor_at_p: TaylorPoly2,
    omega: ParamCurve,
    eps: float,
    **kwargs
) -> float:
    '''
    Predicted eigenvalue of the perforated domain.

    '''
    return predict(lambda_N, u_taylor_at_p, omega, **kwargs).eigenvalue(eps)


def normalized_shift(lambda_eps: float, lambda_N: float, eps: float, alpha: float) -> float:
    return (lambda_eps - lambda_N) / eps ** alpha


class InteriorGrid(NamedTuple):
    points: np.ndarray
    distance: np.ndarray
    spacing: float


def interior_grid(Omega: ParamCurve, resolution: int, margin: float = 0.) -> InteriorGrid:
    '''
    Square grid ``center + h * (i - mid)`` over the bounding box of the
    outer curve, restricted to points inside it and at least ``margin``
    away from it. ``resolution`` is forced odd so the box center is a node.

    '''
    resolution = max(int(resolution), 3)
    resolution += 1 - resolution % 2
    boundary = Omega.sample(_BOUNDARY_NODES)
    lo, hi = boundary.min(axis=0), boundary.max(axis=0)
    center = (lo + hi) / 2.
    h = float(np.max(hi - lo)) / (resolution - 1)
    mid = resolution // 2

    offsets = h * (np.arange(resolution) - mid)
    # row major in x2, then x1
    X2, X1 = np.meshgrid(center[1] + offsets, center[0] + offsets, indexing='ij')
    pts = np.stack([X1.ravel(), X2.ravel()], axis=-1)

    z = (boundary[None, :, 0] - pts[:, None, 0]) + 1j * (boundary[None, :, 1] - pts[:, None, 1])
    dist = np.min(np.abs(z), axis=1)
    with np.errstate(divide='ignore', invalid='ignore'):
        turns = np.sum(np.angle(np.roll(z, -1, axis=1) / z), axis=1) / (2. * np.pi)

    keep = (np.rint(np.nan_to_num(turns)) == 1) & (dist > max(margin, 1e-9 * h))
    return InteriorGrid(pts[keep], dist[keep], h)


class MaxLocation(NamedTuple):
    point: tuple[float, float]
    value: float
    ties: tuple[tuple[float, float], ...]
    unique: bool
    degenerate: bool


def _sample(sampler: Callable, points: np.ndarray, workers: int | None) -> np.ndarray:
    return np.asarray(ordered_map(
        lambda p: float(sampler(p)), list(points), worker_count(workers)
    ))


def optimal_location_max(
    sampler: Callable,
    Omega: ParamCurve,
    resolution: int = 41,
    *,
    margin: float = 0.,
    workers: int | None = None
) -> MaxLocation:
    '''
    Grid maximizer of ``|u|^2``, the best hole center when ``u`` does not
    vanish there. Maximizers equal within a relative 1e-9 are all reported.

    '''
    grid = interior_grid(Omega, resolution, margin)
    if len(grid.points) == 0:
        raise ValidityError('no grid point inside the outer curve, increase resolution')

    values = _sample(sampler, grid.points, workers) ** 2
    best = float(np.max(values))
    tied = np.flatnonzero(values >= best - _TIE_RTOL * max(abs(best), 1e-300))
    ties = tuple((float(x), float(y)) for x, y in grid.points[tied])
    logger.debug(f'max |u|^2 = {best:.12g} at {len(ties)} grid point(s)')
    return MaxLocation(
        point=ties[0],
        value=best,
        ties=ties,
        unique=len(ties) == 1,
        degenerate=len(ties) == len(grid.points) and len(ties) > 1
    )


class Candidate(NamedTuple):
    point: tuple[float, float]
    k: int
    energy: float


class MinLocation(NamedTuple):
    k: int
    candidates: tuple[Candidate, ...]
    advisory: str | None


def optimal_location_min(
    sampler: Callable,
    Omega: ParamCurve,
    omega: ParamCurve,
    resolution: int = 41,
    *,
    margin: float = 0.,
    params: SolverParams | None = None,
    taylor_at: Callable[[np.ndarray], TaylorPoly2] | None = None,
    workers: int | None = None
) -> MinLocation:
    '''
    Candidate hole centers minimizing the shift: the grid points where
    ``u`` vanishes to the largest order, ranked by the energy in front of
    ``eps^2k``. ``taylor_at`` defaults to finite difference extraction.

    '''
    params = params or SolverParams.default()
    grid = interior_grid(Omega, resolution, margin)
    if taylor_at is None:
        def taylor_at(p: np.ndarray) -> TaylorPoly2:
            return taylor_from_function(sampler, CLASSIFY_DEGREE, center=p)

    def classify(p: np.ndarray) -> tuple[int, TaylorPoly2]:
        t = taylor_at(p)
        return classify_order(t, params.classify_tol), t

    orders = ordered_map(classify, list(grid.points), worker_count(workers))
    ks = np.array([k for k, _ in orders])
    top = int(ks.max(initial=0))
    if top == 0:
        return MinLocation(
            0, (),
            'u does not vanish at any grid point, every hole center gives a '
            'logarithmic shift; minimize u(p)^2 instead'
        )

    picked = np.flatnonzero(ks == top)
    candidates = []
    for i in picked:
        lead = homogeneous_part(orders[i][1], top)
        energy = leading_energy(omega, lead, params=params).total
        candidates.append(Candidate(
            (float(grid.points[i][0]), float(grid.points[i][1])), top, energy
        ))

    candidates.sort(key=lambda c: c.energy)

    advisory = None
    nodal = ks >= 1
    reaches = bool(np.any(grid.distance[nodal] <= 2. * grid.spacing))
    if top == 1 and reaches:
        advisory = (
            'no minimizer: single nodal line reaching the boundary, the '
            'eps^2 coefficient tends to 0 toward the boundary'
        )
        logger.warning(advisory)

    return MinLocation(top, tuple(candidates), advisory)
