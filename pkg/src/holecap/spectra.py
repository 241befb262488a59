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
Exact reference spectra: Dirichlet modes of the disk and of the concentric
annulus ``B(0, R) \\ B(0, eps R)``, with the Taylor data of disk modes that
the eigenvalue predictions consume.

'''
from __future__ import annotations

import math
import logging

from dataclasses import dataclass

import numpy as np

from scipy import special
from scipy.optimize import brentq
from scipy.integrate import quad

from holecap.errors import (
    UsageError,
    DegreeError,
    DomainError,
    ResolutionError
)
from holecap.taylor import (
    TaylorPoly2,
    harmonic_pair,
    taylor_from_function
)


logger = logging.getLogger(__name__)


MAX_BESSEL_ORDER: int = 12
MAX_BESSEL_ARG: float = 1e4
MAX_DISK_COUNT: int = 50
MAX_TAYLOR_DEGREE: int = 8

# scan step for the annulus cross product, roots are at least pi apart
_SCAN_STEP = 0.05
_ROOT_TOL = 1e-11


def _check_bessel(m: int, x):
    if m < 0 or m > MAX_BESSEL_ORDER or m != int(m):
        raise DomainError(f'Bessel order must be an integer in 0..{MAX_BESSEL_ORDER}, got {m!r}')

    if np.any(np.abs(x) > MAX_BESSEL_ARG):
        raise DomainError(f'Bessel argument above {MAX_BESSEL_ARG:g}')


def bessel_J(m: int, x):
    _check_bessel(m, x)
    if np.any(np.asarray(x) < 0.):
        raise DomainError('J_m is only provided for x >= 0')

    out = special.jv(m, x)
    return float(out) if np.ndim(out) == 0 else out


def bessel_Y(m: int, x):
    _check_bessel(m, x)
    if np.any(np.asarray(x) <= 0.):
        raise DomainError('Y_m needs x > 0')

    out = special.yv(m, x)
    return float(out) if np.ndim(out) == 0 else out


def bessel_zero(m: int, n: int) -> float:
    '''
    n-th positive zero ``j_m,n`` of ``J_m``.

    '''
    if n < 1:
        raise UsageError(f'radial index must be >= 1, got {n}')

    _check_bessel(m, 0.)
    return float(special.jn_zeros(m, n)[-1])


@dataclass(frozen=True)
class DiskMode:
    '''
    Dirichlet eigenfunction ``N J_m(k r) cos(m t)`` (or ``sin``) of the disk
    of radius ``R`` with ``k = j_m,n / R``, normalized in L2.

    '''
    m: int
    n: int
    R: float
    zero: float
    parity: str = 'cos'
    multiplicity: int = 1
    index: int = 0

    @property
    def wavenumber(self) -> float:
        return self.zero / self.R

    @property
    def eigenvalue(self) -> float:
        return self.wavenumber ** 2

    @property
    def simple(self) -> bool:
        return self.multiplicity == 1

    @property
    def norm(self) -> float:
        '''
        Constant ``N`` making the eigenfunction unit norm in L2.

        '''
        tail = abs(special.jv(self.m + 1, self.zero))
        if self.m == 0:
            return 1. / (math.sqrt(math.pi) * self.R * tail)

        return math.sqrt(2.) / (math.sqrt(math.pi) * self.R * tail)

    def _angular(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        # angular factor and its t derivative
        if self.parity == 'cos':
            return np.cos(self.m * t), -self.m * np.sin(self.m * t)

        return np.sin(self.m * t), self.m * np.cos(self.m * t)

    def __call__(self, x) -> np.ndarray | float:
        x = np.asarray(x, dtype=float)
        r = np.hypot(x[..., 0], x[..., 1])
        t = np.arctan2(x[..., 1], x[..., 0])
        ang, _ = self._angular(t)
        out = self.norm * special.jv(self.m, self.wavenumber * r) * ang
        return float(out) if np.ndim(out) == 0 else out

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        r = np.hypot(x[..., 0], x[..., 1])
        t = np.arctan2(x[..., 1], x[..., 0])
        k, m = self.wavenumber, self.m
        ang, dang = self._angular(t)

        du_dr = self.norm * k * special.jvp(m, k * r) * ang
        if m == 0:
            du_dt_r = np.zeros_like(r)

        else:
            # J_m(kr) / r without the r = 0 singularity
            j_over_r = k * (special.jv(m - 1, k * r) + special.jv(m + 1, k * r)) / (2 * m)
            du_dt_r = self.norm * j_over_r * dang

        c, s = np.cos(t), np.sin(t)
        return np.stack([du_dr * c - du_dt_r * s, du_dr * s + du_dt_r * c], axis=-1)

    def contains(self, p) -> bool:
        return float(np.hypot(*np.asarray(p, dtype=float))) < self.R

    def label(self) -> str:
        return f'm={self.m},n={self.n},R={self.R:g},parity={self.parity}'


def disk_mode(m: int, n: int = 1, R: float = 1., parity: str = 'cos') -> DiskMode:
    if parity not in ('cos', 'sin'):
        raise UsageError(f'parity must be cos or sin, got {parity!r}')

    if m == 0 and parity == 'sin':
        raise UsageError('m = 0 has no sin mode')

    if not R > 0.:
        raise UsageError(f'radius must be positive, got {R!r}')

    return DiskMode(
        m=m, n=n, R=float(R),
        zero=bessel_zero(m, n),
        parity=parity,
        multiplicity=1 if m == 0 else 2
    )


def mode_l2_norm(mode: DiskMode) -> float:
    '''
    L2 norm of the eigenfunction by radial quadrature.

    '''
    k = mode.wavenumber
    radial, _ = quad(
        lambda r: special.jv(mode.m, k * r) ** 2 * r,
        0., mode.R, epsabs=1e-14, epsrel=1e-13, limit=200
    )
    angular = 2. * math.pi if mode.m == 0 else math.pi
    return math.sqrt(mode.norm ** 2 * radial * angular)


def disk_eigenvalues(R: float, count: int) -> tuple[DiskMode, ...]:
    '''
    First ``count`` Dirichlet eigenvalues of the disk of radius ``R``
    counted with multiplicity, ascending. Modes with ``m >= 1`` come as a
    cos/sin pair.

    '''
    if count < 1 or count > MAX_DISK_COUNT:
        raise UsageError(f'count must lie in 1..{MAX_DISK_COUNT}, got {count}')

    if not R > 0.:
        raise UsageError(f'radius must be positive, got {R!r}')

    # j_m,1 > m and j_0,count < pi (count + 1)
    top = min(int(math.ceil(math.pi * (count + 1))), MAX_BESSEL_ORDER)
    candidates = []
    for m in range(top + 1):
        for n, z in enumerate(special.jn_zeros(m, count), start=1):
            candidates.append((float(z), m, n))

    candidates.sort()
    modes: list[DiskMode] = []
    for z, m, n in candidates:
        parities = ('cos',) if m == 0 else ('cos', 'sin')
        for parity in parities:
            modes.append(DiskMode(
                m=m, n=n, R=float(R), zero=z, parity=parity,
                multiplicity=len(parities), index=len(modes) + 1
            ))

        if len(modes) >= count:
            break

    return tuple(modes[:count])


def _center_taylor(mode: DiskMode, degree: int) -> TaylorPoly2:
    # N sum_s (-1)^s (k/2)^(2s+m) / (s! (s+m)!) |x|^2s Re/Im z^m
    m, k = mode.m, mode.wavenumber
    re, im = harmonic_pair(m)
    angular = re if mode.parity == 'cos' else im
    radius2 = TaylorPoly2.from_rows([(2, 0, 1.), (0, 2, 1.)])

    total = TaylorPoly2.zero(degree)
    power = TaylorPoly2.constant(1.)
    s = 0
    while 2 * s + m <= degree:
        coef = (-1) ** s * (k / 2.) ** (2 * s + m) / (math.factorial(s) * math.factorial(s + m))
        total = total + (power * angular) * (mode.norm * coef)
        power = power * radius2
        s += 1

    return TaylorPoly2.from_array(total.coeffs, degree)


def disk_eigenfunction_taylor(mode: DiskMode, p=(0., 0.), degree: int = 4) -> TaylorPoly2:
    '''
    Taylor polynomial of the eigenfunction at ``p``. Exact from the J_m
    power series at the center, finite differences elsewhere (``degree <= 4``
    and about 1e-7 accuracy there).

    '''
    if degree < 0 or degree > MAX_TAYLOR_DEGREE:
        raise DegreeError(f'degree must lie in 0..{MAX_TAYLOR_DEGREE}, got {degree}')

    p = np.asarray(p, dtype=float)
    if not mode.contains(p):
        raise DomainError(f'point {tuple(p)} is outside the disk of radius {mode.R:g}')

    if np.all(p == 0.):
        return _center_taylor(mode, degree)

    return taylor_from_function(mode, degree, center=p)


def annulus_cross_product(k, eps: float, m: int):
    '''
    ``J_m(k eps) Y_m(k) - J_m(k) Y_m(k eps)`` divided by
    ``sqrt(J_m(k eps)^2 + Y_m(k eps)^2)``; its positive roots ``k`` give
    the annulus eigenvalues ``k^2``.

    '''
    k = np.asarray(k, dtype=float)
    ja, ya = special.jv(m, k * eps), special.yv(m, k * eps)
    jb, yb = special.jv(m, k), special.yv(m, k)
    return (ja * yb - jb * ya) / np.hypot(ja, ya)


def annulus_eigenvalues(
    eps: float,
    m: int,
    count: int,
    R: float = 1.
) -> tuple[float, ...]:
    '''
    First ``count`` Dirichlet eigenvalues with angular index ``m`` of the
    annulus ``eps R < |x| < R``, each listed once.

    '''
    if not 1e-6 <= eps <= 0.9:
        raise DomainError(f'eps must lie in [1e-6, 0.9], got {eps!r}')

    if count < 1:
        raise UsageError(f'count must be >= 1, got {count}')

    _check_bessel(m, 0.)

    def f(k: float) -> float:
        return float(annulus_cross_product(k, eps, m))

    # roots are above the disk ones and spaced about pi / (1 - eps)
    lo = 0.5 * special.jn_zeros(m, 1)[0]
    limit = 2. * (m + math.pi * (count + 1)) / (1. - eps) + 10.
    roots: list[float] = []
    while len(roots) < count and lo < limit:
        hi = min(lo + 10., limit)
        ks = np.arange(lo, hi + _SCAN_STEP / 2, _SCAN_STEP)
        vals = annulus_cross_product(ks, eps, m)
        for i in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0):
            root = brentq(f, ks[i], ks[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps)
            if abs(f(root)) > _ROOT_TOL:
                raise ResolutionError(
                    f'annulus root near k={root:.12g} has residual {f(root):.3e}'
                )

            roots.append(root)
            if len(roots) == count:
                break

        lo = ks[-1]

    if len(roots) < count:
        raise ResolutionError(
            f'found {len(roots)} of {count} annulus roots for m={m}, eps={eps:g} below k={limit:g}'
        )

    logger.debug(f'annulus m={m} eps={eps:g}: k = {roots}')
    return tuple((k / R) ** 2 for k in roots)
