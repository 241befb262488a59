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
Capacities of small holes and the Dirichlet eigenvalue shifts they cause.

:class:`CapacityContext` is the high level entry point: it computes
capacity series on demand and keeps them in an on-disk cache keyed by the
geometry, the boundary datum, the solver params and the engine sources.

Typical usage::

    ctx = CapacityContext()
    key, series = ctx.series_for('disk', Omega, omega, u, N_max=3)
    value = ctx.capacity(series, eps=0.05)

Computing a series happens only on the first request for a given
*(name, hash)* pair, later requests reuse ``~/.holecap`` (or the path in
``HOLECAP_CACHE`` or *cache_path*).

'''
import struct
import logging
import hashlib

from pathlib import Path

from holecap.cache import (
    CacheKey,
    Cache
)
from holecap.errors import HoleCapError as HoleCapError
from holecap.geometry import ParamCurve
from holecap.params import SolverParams as SolverParams
from holecap.series import (
    CapacitySeries as CapacitySeries,
    capacity_series,
    eval_capacity_series,
    hash_engine
)
from holecap.taylor import TaylorPoly2 as TaylorPoly2


logger = logging.getLogger(__name__)


def hash_series_for_cache(
    Omega: ParamCurve,
    omega: ParamCurve,
    u: TaylorPoly2,
    N_max: int,
    params: SolverParams,
    *,
    as_bytes: bool = False
) -> str | bytes:
    h = hashlib.sha256()
    h.update(hash_engine(as_bytes=True))
    h.update(Omega.as_bytes())
    h.update(omega.as_bytes())
    h.update(u.as_bytes())
    h.update(struct.pack('<q', N_max))
    h.update(params.as_bytes())

    return (
        h.digest() if as_bytes
        else h.hexdigest()
    )


class CapacityContext:
    '''
    Encapsulates caching + series computation.

    '''

    def __init__(
        self,
        cache_path: Path | str | None = None,
        readonly: bool = False,  # never compute, only serve cached series
        ipc_locked: bool = True,  # use ipc locks when accessing cache directories
        params: SolverParams | None = None
    ):
        self._cache = Cache(
            fs_location=cache_path, readonly=readonly, ipc_locked=ipc_locked)
        self._readonly = readonly
        self.params = params or SolverParams.default()
        logger.info(
            f'Initialized CapacityContext with cache at {self._cache.fs_location}'
        )

    @property
    def is_readonly(self) -> bool:
        return self._readonly

    def key_for(
        self,
        name: str,
        Omega: ParamCurve,
        omega: ParamCurve,
        u: TaylorPoly2,
        N_max: int,
        params: SolverParams | None = None
    ) -> CacheKey:
        params = params or self.params
        return CacheKey(
            name=name.replace('/', '_'),
            src_hash=hash_series_for_cache(Omega, omega, u, N_max, params),
            params=params
        )

    def series_for(
        self,
        name: str,
        Omega: ParamCurve,
        omega: ParamCurve,
        u: TaylorPoly2,
        N_max: int,
        *,
        force_reload: bool = False,
        params: SolverParams | None = None
    ) -> tuple[CacheKey, CapacitySeries]:
        '''
        Return the capacity series of ``omega`` in ``Omega`` for datum
        ``u`` up to order ``N_max``, computing it if necessary.

        '''
        key = self.key_for(name, Omega, omega, u, N_max, params)
        logger.debug(f'Requesting series for {key}')

        series = self._cache.get_series(key, force_reload=force_reload)
        if series is not None:
            logger.debug(f'Using cached series for {key}')
            return key, series

        if self.is_readonly:
            raise RuntimeError('Series not cached and in read only context!')

        logger.info(f'Computing series for {key}')
        series = capacity_series(Omega, omega, u, N_max, params=key.params)
        self._cache.set_series(key, series)
        return key, series

    def capacity(self, series: CapacitySeries, eps: float) -> float:
        return eval_capacity_series(series, eps, guard=self.params.log_guard)
