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
Capacity coefficients ``c_(n,l)`` and the double sum

    Cap(eps) ~ sum_n eps^n sum_{l <= n+1} c_(n,l) / D^l,
    D = r0 + log(eps) / (2 pi),

together with the leading order quantities used when ``u`` vanishes to
order ``k`` at the origin.

'''
from __future__ import annotations

import math
import logging

from typing import NamedTuple
from dataclasses import dataclass, field

import numpy as np

from holecap.bem import make_grid
from holecap.errors import ValidityError
from holecap.geometry import ParamCurve
from holecap.harmonic import (
    check_nested,
    r0 as harmonic_r0,
    solve_exterior_bounded
)
from holecap.params import SolverParams, default_param_log_guard
from holecap.taylor import (
    TaylorPoly2,
    vanishing_order,
    interior_gradient_energy
)

from .coefficients import OuterTables, density_coefficients, check_order
from .ladder import LadderCoefficients, ladder_coefficients


logger = logging.getLogger(__name__)


class SeriesRecord(NamedTuple):
    n: int
    l: int
    c: float
    r0: float


@dataclass(frozen=True)
class CapacitySeries:
    r0: float
    coeffs: tuple[tuple[float, ...], ...]
    provenance: dict = field(default_factory=dict, compare=False)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def c(self, n: int, l: int) -> float:
        if n > self.order or l > n + 1 or l < 0:
            return 0.

        return self.coeffs[n][l]

    def records(self) -> list[SeriesRecord]:
        return [
            SeriesRecord(n, l, c, self.r0)
            for n, row in enumerate(self.coeffs)
            for l, c in enumerate(row)
        ]

    def as_dict(self) -> dict:
        return {
            'r0': self.r0,
            'order': self.order,
            'coeffs': [list(row) for row in self.coeffs],
            'provenance': dict(self.provenance)
        }

    @staticmethod
    def from_dict(d: dict) -> CapacitySeries:
        coeffs = tuple(tuple(float(c) for c in row) for row in d['coeffs'])
        for n, row in enumerate(coeffs):
            if len(row) != n + 2:
                raise ValueError(f'series row {n} has {len(row)} entries, expected {n + 2}')

        return CapacitySeries(
            r0=float(d['r0']),
            coeffs=coeffs,
            provenance=dict(d.get('provenance', {}))
        )


def coefficients_from_ladder(ladder: LadderCoefficients, inner) -> tuple[tuple[float, ...], ...]:
    rows = []
    for n in range(ladder.order + 1):
        rows.append(tuple(
            float(-inner.integrate(ladder.lambda_(n, l)) + (ladder.xi[n] if l == 0 else 0.))
            for l in range(n + 2)
        ))

    return tuple(rows)


def capacity_series(
    Omega: ParamCurve,
    omega: ParamCurve,
    u: TaylorPoly2,
    N_max: int,
    n: int | None = None,
    *,
    params: SolverParams | None = None,
    with_ladder: bool = False
) -> CapacitySeries | tuple[CapacitySeries, LadderCoefficients]:
    params = params or SolverParams.default()
    if n is not None:
        params = params.replace(n=n, max_n=max(params.max_n, n))

    check_order(N_max, params)
    check_nested(Omega, omega)

    outer = make_grid(Omega, params.n)
    inner = make_grid(omega, params.n)
    logger.debug(f'capacity series N={N_max} on {Omega!r} / {omega!r}, n={params.n}')

    try:
        tables = OuterTables(outer, N_max, params.max_deriv_order)
        dens = density_coefficients(outer, inner, u, N_max, params=params, tables=tables)
        ladder = ladder_coefficients(dens, u, N_max, params=params, tables=tables)

    except Exception as e:
        logger.error(f'series engine failed for {u!r}: {e}')
        raise

    value_r0 = harmonic_r0(Omega, omega, params.n, cond_warn=params.cond_warn)
    if abs(ladder.r[0] - value_r0) > 1e-6 * max(abs(value_r0), 1.):
        logger.warning(
            f'ladder r_0 {ladder.r[0]:.12g} disagrees with r0 {value_r0:.12g}'
        )

    series = CapacitySeries(
        r0=value_r0,
        coeffs=coefficients_from_ladder(ladder, inner),
        provenance={
            'outer': repr(Omega),
            'hole': repr(omega),
            'u': u.as_text(),
            'n': params.n
        }
    )
    if with_ladder:
        return series, ladder

    return series


def log_denominator(r0: float, eps: float, guard: float = default_param_log_guard) -> float:
    if not 0. < eps < 1.:
        raise ValidityError(f'eps must lie in (0, 1), got {eps!r}')

    D = r0 + math.log(eps) / (2. * math.pi)
    if abs(D) <= guard:
        raise ValidityError(
            f'r0 + log(eps)/(2 pi) = {D:.3e} is within {guard:g} of 0 at eps={eps:g}'
        )

    return D


def series_terms(series: CapacitySeries, eps: float, guard: float = default_param_log_guard) -> np.ndarray:
    '''
    Contribution of every order ``n`` to the truncated double sum.

    '''
    D = log_denominator(series.r0, eps, guard)
    return np.array([
        eps ** n * sum(c / D ** l for l, c in enumerate(row))
        for n, row in enumerate(series.coeffs)
    ])


def eval_capacity_series(
    series: CapacitySeries,
    eps: float,
    *,
    guard: float = default_param_log_guard
) -> float:
    terms = series_terms(series, eps, guard)
    nonzero = np.flatnonzero(np.abs(terms) > 1e-300)
    if len(nonzero) >= 2:
        last, prev = abs(terms[nonzero[-1]]), abs(terms[nonzero[-2]])
        if last > prev:
            logger.warning(
                f'series terms grow at eps={eps:g} ({prev:.3e} -> {last:.3e}); '
                f'eps is likely outside the convergence region'
            )

    return float(np.sum(terms))


class LeadingEnergy(NamedTuple):
    k: int
    exterior: float
    interior: float
    limit: float

    @property
    def total(self) -> float:
        return self.exterior + self.interior


def leading_energy(
    omega: ParamCurve,
    leading: TaylorPoly2,
    n: int | None = None,
    *,
    params: SolverParams | None = None
) -> LeadingEnergy:
    '''
    Exterior energy of the bounded harmonic extension of ``leading`` off the
    hole, interior gradient energy over the hole and the extension's limit
    at infinity.

    '''
    params = params or SolverParams.default()
    grid = make_grid(omega, n or params.n)
    k = vanishing_order(leading, params.vanish_tol)
    ext = solve_exterior_bounded(grid, leading(grid.points), cond_warn=params.cond_warn)
    return LeadingEnergy(
        k=k,
        exterior=ext.energy(),
        interior=interior_gradient_energy(leading, omega),
        limit=ext.limit
    )


def leading_capacity(
    leading: LeadingEnergy,
    r0: float,
    eps: float,
    *,
    guard: float = default_param_log_guard
) -> float:
    D = log_denominator(r0, eps, guard)
    return eps ** (2 * leading.k) * (leading.total - leading.limit ** 2 / D)


def condenser_leading(r0: float, eps: float, *, guard: float = default_param_log_guard) -> float:
    return -1. / log_denominator(r0, eps, guard)
