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
Helpers for validation of user supplied text: curve specs, polynomial rows
and sweep grids. Everything here raises :class:`holecap.errors.UsageError`.

'''
import re
import math

from holecap.errors import UsageError


_KEY_PATTERN = r'^[A-Za-z_][A-Za-z0-9_]*$'
_KEY_RE = re.compile(_KEY_PATTERN)

_NUM_PATTERN = r'^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$'
_NUM_RE = re.compile(_NUM_PATTERN)

_INT_PATTERN = r'^[+-]?\d+$'
_INT_RE = re.compile(_INT_PATTERN)

# "pi", "pi/4", "3pi/4", "-pi/2" style angles
_ANGLE_RE = re.compile(r'^([+-]?\d*\.?\d*)\*?pi(?:/(\d+(?:\.\d*)?))?$')


def check_key(name: str, what: str):
    '''
    Make sure ``name`` is a plain identifier or raise UsageError.
    ``what`` is used for a helpful error message.

    '''
    if _KEY_RE.match(name):
        return

    raise UsageError(f'{what} "{name}" is not a valid key')


def parse_number(token: str, what: str) -> float:
    '''
    Parse a finite float literal, also accepting ``pi`` multiples for
    angles.

    '''
    token = token.strip()
    if _NUM_RE.match(token):
        value = float(token)

    else:
        m = _ANGLE_RE.match(token)
        if not m:
            raise UsageError(f'{what} "{token}" is not a number')

        coeff, denom = m.groups()
        if coeff in ('', '+'):
            coeff = '1'

        elif coeff == '-':
            coeff = '-1'

        value = float(coeff) * math.pi / (float(denom) if denom else 1.)

    if not math.isfinite(value):
        raise UsageError(f'{what} "{token}" is not finite')

    return value


def parse_int(token: str, what: str) -> int:
    token = token.strip()
    if not _INT_RE.match(token):
        raise UsageError(f'{what} "{token}" is not an integer')

    return int(token)


def parse_pairs(text: str, what: str, sep: str = ',') -> dict[str, str]:
    '''
    Split ``a=1,b=2`` (or whitespace separated with ``sep=None``) into a
    dict, validating every key.

    '''
    out: dict[str, str] = {}
    for chunk in text.split(sep):
        chunk = chunk.strip()
        if not chunk:
            continue

        if '=' not in chunk:
            raise UsageError(f'{what}: expected key=value, got "{chunk}"')

        key, value = (p.strip() for p in chunk.split('=', 1))
        check_key(key, f'{what} key')
        if key in out:
            raise UsageError(f'{what}: duplicate key "{key}"')

        out[key] = value

    return out


def parse_rows(text: str, width: int, what: str) -> list[list[float]]:
    '''
    Parse ``;`` or newline separated rows of ``width`` numbers.

    '''
    rows = []
    for raw in re.split(r'[;\n]', text):
        raw = raw.strip()
        if not raw:
            continue

        tokens = raw.replace(',', ' ').split()
        if len(tokens) != width:
            raise UsageError(
                f'{what} row "{raw}" has {len(tokens)} fields, expected {width}'
            )

        rows.append([parse_number(t, what) for t in tokens])

    if not rows:
        raise UsageError(f'{what}: no rows given')

    return rows


def parse_grid(text: str, what: str) -> list[float]:
    '''
    Parse either an explicit comma separated list (``0.1,0.05``) or a
    geometric family ``B^-k,k=A..C`` (``1.5^-k,k=4..14``).

    '''
    text = text.strip()
    m = re.match(r'^([0-9.eE+-]+)\^-k\s*,\s*k\s*=\s*(\d+)\.\.(\d+)$', text)
    if m:
        base = parse_number(m.group(1), what)
        lo, hi = int(m.group(2)), int(m.group(3))
        if base <= 1. or hi < lo:
            raise UsageError(f'{what} "{text}" is not a decreasing family')

        return [base ** -k for k in range(lo, hi + 1)]

    values = [parse_number(t, what) for t in text.split(',') if t.strip()]
    if not values:
        raise UsageError(f'{what}: empty grid')

    return values
