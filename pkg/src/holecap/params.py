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
Numerical knobs shared by the solvers, the series engine and the CLI.

``SolverParams`` is immutable and hashable into cache keys through
:meth:`SolverParams.as_bytes`. Values come from, in order of precedence,
explicit overrides (CLI flags), a ``key = value`` config file and the
module level ``default_*`` constants below.

'''
from __future__ import annotations

import struct
import logging

from pathlib import Path
from dataclasses import dataclass, fields

from holecap.errors import UsageError


logger = logging.getLogger(__name__)


default_param_n: int = 256
default_param_max_n: int = 2048
default_param_near_factor: float = 5.
default_param_gap_factor: float = 5.
default_param_cond_warn: float = 1e12
default_param_log_guard: float = 0.05
default_param_vanish_tol: float = 1e-9
default_param_classify_tol: float = 1e-6
default_param_max_order: int = 6
default_param_max_deriv_order: int = 8
default_param_trig_modes: int = 32
default_param_equilibrium_tol: float = 1e-6


@dataclass(frozen=True)
class SolverParams:
    n: int = default_param_n
    max_n: int = default_param_max_n
    near_factor: float = default_param_near_factor
    gap_factor: float = default_param_gap_factor
    cond_warn: float = default_param_cond_warn
    log_guard: float = default_param_log_guard
    vanish_tol: float = default_param_vanish_tol
    classify_tol: float = default_param_classify_tol
    max_order: int = default_param_max_order
    max_deriv_order: int = default_param_max_deriv_order
    trig_modes: int = default_param_trig_modes
    equilibrium_tol: float = default_param_equilibrium_tol

    def __post_init__(self):
        if self.n < 16 or self.n % 2:
            raise UsageError(f'n must be even and >= 16, got {self.n}')

        if self.max_n < self.n:
            raise UsageError(
                f'max_n ({self.max_n}) smaller than n ({self.n})'
            )

        if self.max_order < 0 or self.max_deriv_order < 1:
            raise UsageError('orders must be non negative')

        if self.trig_modes < 1:
            raise UsageError(f'trig_modes must be positive, got {self.trig_modes}')

        if not self.equilibrium_tol > 0.:
            raise UsageError(f'equilibrium_tol must be positive, got {self.equilibrium_tol}')

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def as_bytes(self) -> bytes:
        # ints as little endian int64, floats as float64, in field order
        out = bytearray()
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, int):
                out += struct.pack('<q', value)

            else:
                out += struct.pack('<d', value)

        return bytes(out)

    def replace(self, **overrides) -> SolverParams:
        return SolverParams.from_dict({**self.as_dict(), **overrides})

    @staticmethod
    def from_dict(d: dict) -> SolverParams:
        known = {f.name: f for f in fields(SolverParams)}
        unknown = set(d) - set(known)
        if unknown:
            raise UsageError(
                f'unknown solver parameter(s): {", ".join(sorted(unknown))}'
            )

        kwargs = {}
        for name, value in d.items():
            if value is None:
                continue

            caster = int if known[name].type in ('int', int) else float
            try:
                kwargs[name] = caster(value)

            except (TypeError, ValueError):
                raise UsageError(
                    f'parameter {name} expects {caster.__name__}, got {value!r}'
                ) from None

        return SolverParams(**kwargs)

    @staticmethod
    def default() -> SolverParams:
        return SolverParams()


def load_config_file(path: Path | str) -> dict[str, str]:
    '''
    Parse a ``key = value`` text file, ``#`` starts a comment.

    '''
    path = Path(path)
    if not path.is_file():
        raise UsageError(f'config file {path} not found')

    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue

        if '=' not in line:
            raise UsageError(f'{path}:{lineno}: expected "key = value"')

        key, value = (part.strip() for part in line.split('=', 1))
        if not key or not value:
            raise UsageError(f'{path}:{lineno}: empty key or value')

        values[key.replace('-', '_')] = value

    logger.debug(f'Loaded {len(values)} config entries from {path}')
    return values


def resolve_params(
    overrides: dict | None = None,
    config: dict | None = None
) -> SolverParams:
    '''
    Merge defaults < config entries < explicit overrides (``None`` values
    are treated as "not given").

    '''
    merged: dict = dict(config or {})

    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value

    return SolverParams.from_dict(merged)
