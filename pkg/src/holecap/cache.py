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
Filesystem backed cache for computed capacity series.

Each entry is stored under ``<cache_root>/<name>/<src_hash>/`` with two
artifacts:

* ``params.json``: the :class:`SolverParams` the series was computed with.
* ``series.json``: the :class:`CapacitySeries` record.

``src_hash`` covers the engine sources, both curves, the datum ``u`` and
the solver params, so a stale entry is never returned for changed inputs.
The :class:`Cache` keeps an in-memory mirror of the entries and always
persists updates to disk so later sessions can reuse them.

'''
from __future__ import annotations

import os
import json
import logging

from pathlib import Path
from contextlib import contextmanager as cm
from dataclasses import dataclass

from holecap.params import SolverParams
from holecap.series import CapacitySeries
from holecap.utils import (
    fd_lock,
    fd_unlock
)


logger = logging.getLogger(__name__)


DEFAULT_CACHE_PATH = Path.home() / '.holecap'


def default_cache_path() -> Path:
    env = os.getenv('HOLECAP_CACHE')
    return Path(env) if env else DEFAULT_CACHE_PATH


@dataclass(frozen=True)
class CacheKey:
    name: str
    src_hash: str
    params: SolverParams

    def __str__(self) -> str:
        return f'{self.name} (hash {self.src_hash[:16]}, n={self.params.n})'


class Cache:
    _cache: dict[CacheKey, CapacitySeries]

    def __init__(
        self,
        fs_location: Path | str | None = None,
        readonly: bool = False,
        ipc_locked: bool = True
    ):
        self.fs_location = (
            Path(fs_location) if fs_location else default_cache_path()
        )
        self.readonly = readonly
        self.ipc_locked = ipc_locked

        if not readonly:
            self.fs_location.mkdir(parents=True, exist_ok=True)

        else:
            if not self.fs_location.is_dir():
                raise RuntimeError(
                    f'Cache dir at {self.fs_location} not present and readonly=True'
                )

        logger.info(f'Using cache directory {self.fs_location}')

        self._cache = {}
        self._warm_from_disk()

    @cm
    def _dir_lock_ipc(self, path: Path | str, *, shared: bool = False):
        lock_path = Path(path) / '.lock'
        fd = os.open(lock_path, os.O_RDWR | os.O_CREAT, 0o600)
        try:
            fd_lock(fd, exclusive=not shared)
            yield

        finally:
            fd_unlock(fd)
            os.close(fd)

    @cm
    def dir_lock(self, path: Path | str, *, shared: bool = False):
        '''
        Context-manager that holds a POSIX/Win32 lock on <path>/.lock

        Use `shared=True` for readers, `shared=False` for writers.

        '''
        if self.ipc_locked and Path(path).is_dir():
            with self._dir_lock_ipc(path, shared=shared):
                yield

            return

        yield

    def _load_entry(self, name: str, entry_dir: Path) -> tuple[CacheKey, CapacitySeries] | None:
        src_hash = entry_dir.name
        params_path = entry_dir / 'params.json'
        series_path = entry_dir / 'series.json'
        if not params_path.is_file() or not series_path.is_file():
            logger.warning(
                f'Incomplete cache entry for {name} (hash {src_hash}), skipping...'
            )
            return None

        try:
            params = SolverParams.from_dict(json.loads(params_path.read_text()))
            series = CapacitySeries.from_dict(json.loads(series_path.read_text()))

        except (ValueError, KeyError, TypeError) as e:
            logger.warning(
                f'Malformed cache entry for {name} (hash {src_hash}): {e}, skipping...'
            )
            return None

        return CacheKey(name=name, src_hash=src_hash, params=params), series

    def _warm_from_disk(self) -> None:
        '''
        Populate the in-memory map with entries already on disk.

        '''
        for name_dir in sorted(self.fs_location.iterdir()):
            if not name_dir.is_dir():
                continue

            for entry_dir in sorted(name_dir.iterdir()):
                if not entry_dir.is_dir():
                    continue

                with self.dir_lock(entry_dir, shared=True):
                    loaded = self._load_entry(name_dir.name, entry_dir)

                if loaded is None:
                    continue

                key, series = loaded
                self._cache[key] = series
                logger.debug(f'Loaded cached series for {key}')

    def __len__(self) -> int:
        return len(self._cache)

    def get_entry_path(self, key: CacheKey) -> Path:
        return self.fs_location / key.name / key.src_hash

    def get_series(
        self,
        key: CacheKey,
        *,
        force_reload: bool = False
    ) -> CapacitySeries | None:
        '''
        Return the cached series for *key* or *None* if missing.

        '''
        if not force_reload and key in self._cache:
            logger.debug(f'Returning in-memory series for {key}')
            return self._cache[key]

        entry_dir = self.get_entry_path(key)
        if not entry_dir.is_dir():
            return None

        with self.dir_lock(entry_dir, shared=True):
            loaded = self._load_entry(key.name, entry_dir)

        if loaded is None:
            return None

        disk_key, series = loaded
        if disk_key.params != key.params:
            logger.warning(f'Params on disk do not match {key}, ignoring entry')
            return None

        self._cache[key] = series
        return series

    def set_series(self, key: CacheKey, series: CapacitySeries) -> None:
        '''
        Write *series* to disk and cache it in-memory.

        '''
        if self.readonly:
            raise RuntimeError(
                f'Tried to store series {key} using a readonly Cache!'
            )

        logger.debug(f'Storing series for {key}')
        self._cache[key] = series

        entry_dir = self.get_entry_path(key)
        entry_dir.mkdir(parents=True, exist_ok=True)
        with self.dir_lock(entry_dir, shared=False):
            (entry_dir / 'params.json').write_text(
                json.dumps(key.params.as_dict(), sort_keys=True))
            (entry_dir / 'series.json').write_text(
                json.dumps(series.as_dict(), sort_keys=True))
