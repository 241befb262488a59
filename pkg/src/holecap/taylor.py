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
Bivariate Taylor polynomials of the boundary datum ``u`` around the origin.

``TaylorPoly2.coeffs[h, j]`` is the coefficient of ``x1^h x2^j``, that is
``d1^h d2^j u(0) / (h! j!)``. Arithmetic is plain 2D coefficient
convolution, evaluation goes through ``numpy.polynomial.polynomial``.

'''
from __future__ import annotations

import math
import struct
import logging

from typing import Callable, NamedTuple, Protocol, runtime_checkable
from dataclasses import dataclass

import numpy as np
import numpy.polynomial.polynomial as npoly

from scipy.signal import convolve2d
from scipy.integrate import quad_vec

from holecap.errors import (
    UsageError,
    DataError,
    DegreeError,
    NotHarmonicError,
    ZeroFunctionError
)
from holecap.geometry import ParamCurve
from holecap.sanitize import parse_rows
from holecap.params import default_param_vanish_tol


logger = logging.getLogger(__name__)


MAX_DEGREE: int = 12
_HARMONIC_TOL = 1e-12


@runtime_checkable
class Evaluable(Protocol):
    '''
    Anything ``u_capacity`` can use as boundary datum: values and gradients
    at an array of points with trailing dimension 2.

    '''

    def __call__(self, x) -> np.ndarray: ...

    def gradient(self, x) -> np.ndarray: ...


def _trim(coeffs: np.ndarray, degree: int) -> np.ndarray:
    out = np.zeros((degree + 1, degree + 1))
    rows = min(coeffs.shape[0], degree + 1)
    cols = min(coeffs.shape[1], degree + 1)
    out[:rows, :cols] = coeffs[:rows, :cols]
    h, j = np.indices(out.shape)
    out[h + j > degree] = 0.
    return out


def _total_degree(coeffs: np.ndarray) -> int:
    h, j = np.nonzero(coeffs)
    return int(np.max(h + j)) if h.size else 0


def _mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return convolve2d(a, b, mode='full')


def _power(base: np.ndarray, k: int) -> np.ndarray:
    out = np.ones((1, 1))
    for _ in range(k):
        out = _mul(out, base)

    return out


def _substitute(coeffs: np.ndarray, s1: np.ndarray, s2: np.ndarray, degree: int) -> np.ndarray:
    '''
    Coefficients of ``p(s1(x), s2(x))`` for affine polynomials s1, s2.

    '''
    out = np.zeros((degree + 1, degree + 1))
    p1 = [_power(s1, h) for h in range(degree + 1)]
    p2 = [_power(s2, j) for j in range(degree + 1)]
    for h, j in zip(*np.nonzero(coeffs)):
        term = coeffs[h, j] * _mul(p1[h], p2[j])
        out += _trim(term, degree)

    return out


@dataclass(frozen=True, eq=False)
class TaylorPoly2:
    coeffs: np.ndarray
    degree: int

    def __post_init__(self):
        if self.degree < 0 or self.degree > MAX_DEGREE:
            raise UsageError(f'polynomial degree {self.degree} outside 0..{MAX_DEGREE}')

        if self.coeffs.shape != (self.degree + 1, self.degree + 1):
            raise ValueError(
                f'coefficient array shape {self.coeffs.shape} does not match '
                f'degree {self.degree}'
            )

        if not np.all(np.isfinite(self.coeffs)):
            raise DataError('polynomial has non finite coefficients')

    @staticmethod
    def from_array(coeffs, degree: int | None = None) -> TaylorPoly2:
        coeffs = np.atleast_2d(np.asarray(coeffs, dtype=float))
        if degree is None:
            degree = _total_degree(coeffs)

        return TaylorPoly2(_trim(coeffs, degree), degree)

    @staticmethod
    def from_rows(rows, degree: int | None = None) -> TaylorPoly2:
        '''
        Build from ``(h, j, coeff)`` triples, repeated monomials add up.

        '''
        rows = list(rows)
        top = max((int(h) + int(j) for h, j, _ in rows), default=0)
        degree = top if degree is None else degree
        if top > degree:
            raise DegreeError(f'monomial of degree {top} above declared degree {degree}')

        if degree > MAX_DEGREE:
            raise UsageError(f'polynomial degree {degree} above {MAX_DEGREE}')

        coeffs = np.zeros((degree + 1, degree + 1))
        for h, j, c in rows:
            if h != int(h) or j != int(j) or h < 0 or j < 0:
                raise UsageError(f'monomial exponents must be non negative integers, got ({h}, {j})')

            coeffs[int(h), int(j)] += c

        return TaylorPoly2(coeffs, degree)

    @staticmethod
    def from_text(text: str) -> TaylorPoly2:
        '''
        Parse ``h j coeff`` rows separated by ``;`` or newlines.

        '''
        return TaylorPoly2.from_rows(parse_rows(text, 3, 'polynomial'))

    @staticmethod
    def zero(degree: int = 0) -> TaylorPoly2:
        return TaylorPoly2(np.zeros((degree + 1, degree + 1)), degree)

    @staticmethod
    def constant(value: float) -> TaylorPoly2:
        return TaylorPoly2(np.array([[float(value)]]), 0)

    def rows(self) -> list[tuple[int, int, float]]:
        return [
            (int(h), int(j), float(self.coeffs[h, j]))
            for h, j in zip(*np.nonzero(self.coeffs))
        ]

    def as_text(self) -> str:
        return '; '.join(f'{h} {j} {c:.17g}' for h, j, c in self.rows())

    def as_bytes(self) -> bytes:
        return struct.pack('<q', self.degree) + np.ascontiguousarray(
            self.coeffs, dtype='<f8').tobytes()

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def __call__(self, x) -> np.ndarray | float:
        x = np.asarray(x, dtype=float)
        out = npoly.polyval2d(x[..., 0], x[..., 1], self.coeffs)
        return float(out) if np.ndim(out) == 0 else out

    def derivative(self, h: int, j: int) -> TaylorPoly2:
        c = self.coeffs
        if h:
            c = npoly.polyder(c, h, axis=0)

        if j:
            c = npoly.polyder(c, j, axis=1)

        if c.size == 0:
            return TaylorPoly2.zero()

        return TaylorPoly2.from_array(c, max(self.degree - h - j, 0))

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.stack([
            np.asarray(self.derivative(1, 0)(x)),
            np.asarray(self.derivative(0, 1)(x))
        ], axis=-1)

    def laplacian(self) -> TaylorPoly2:
        return self.derivative(2, 0) + self.derivative(0, 2)

    def homogeneous(self, k: int) -> TaylorPoly2:
        h, j = np.indices(self.coeffs.shape)
        c = np.where(h + j == k, self.coeffs, 0.)
        return TaylorPoly2(c, self.degree)

    def part_norm(self, k: int) -> float:
        h, j = np.indices(self.coeffs.shape)
        return float(np.max(np.abs(self.coeffs[h + j == k]), initial=0.))

    def shift(self, p) -> TaylorPoly2:
        '''
        Re-expand around ``p``: returns q with ``q(x) = self(x + p)``.

        '''
        p1, p2 = (float(v) for v in p)
        s1 = np.array([[p1, 0.], [1., 0.]])
        s2 = np.array([[p2, 1.], [0., 0.]])
        return TaylorPoly2(_substitute(self.coeffs, s1, s2, self.degree), self.degree)

    def rotate(self, angle: float) -> TaylorPoly2:
        '''
        q(x) = self(R x) with R the counterclockwise rotation by ``angle``,
        so that in polar form q(r, t) = self(r, t + angle).

        '''
        c, s = math.cos(angle), math.sin(angle)
        s1 = np.array([[0., -s], [c, 0.]])
        s2 = np.array([[0., c], [s, 0.]])
        return TaylorPoly2(_substitute(self.coeffs, s1, s2, self.degree), self.degree)

    def scale(self, factor: float) -> TaylorPoly2:
        h, j = np.indices(self.coeffs.shape)
        return TaylorPoly2(self.coeffs * float(factor) ** (h + j), self.degree)

    def __add__(self, other: TaylorPoly2) -> TaylorPoly2:
        degree = max(self.degree, other.degree)
        return TaylorPoly2(
            _trim(self.coeffs, degree) + _trim(other.coeffs, degree), degree)

    def __neg__(self) -> TaylorPoly2:
        return TaylorPoly2(-self.coeffs, self.degree)

    def __sub__(self, other: TaylorPoly2) -> TaylorPoly2:
        return self + (-other)

    def __mul__(self, other: TaylorPoly2 | float) -> TaylorPoly2:
        if isinstance(other, TaylorPoly2):
            degree = self.degree + other.degree
            return TaylorPoly2(_trim(_mul(self.coeffs, other.coeffs), degree), degree)

        return TaylorPoly2(self.coeffs * float(other), self.degree)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f'TaylorPoly2({self.as_text() or "0"})'


class AnalyticFunction:
    '''
    Adapter turning a plain callable into an :class:`Evaluable`; the
    gradient falls back to fourth order central differences.

    '''

    def __init__(
        self,
        fn: Callable[[np.ndarray], np.ndarray],
        grad: Callable[[np.ndarray], np.ndarray] | None = None,
        *,
        name: str = 'u',
        step: float = 1e-4
    ):
        self.fn = fn
        self.grad = grad
        self.name = name
        self.step = step

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        values = np.asarray(self.fn(x), dtype=float)
        if not np.all(np.isfinite(values)):
            raise DataError(f'{self.name} returned non finite values')

        return values

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.grad is not None:
            return np.asarray(self.grad(x), dtype=float)

        h = self.step
        out = []
        for axis in range(2):
            e = np.zeros(2)
            e[axis] = h
            out.append(
                (8. * (self(x + e) - self(x - e)) - (self(x + 2 * e) - self(x - 2 * e)))
                / (12. * h)
            )

        return np.stack(out, axis=-1)

    def __repr__(self) -> str:
        return f'AnalyticFunction({self.name})'


def as_evaluable(u) -> Evaluable:
    if isinstance(u, Evaluable):
        return u

    if callable(u):
        return AnalyticFunction(u)

    return TaylorPoly2.constant(float(u))


def vanishing_order(p: TaylorPoly2, tol: float = default_param_vanish_tol) -> int:
    scale = p.max_abs()
    if scale == 0.:
        raise ZeroFunctionError('polynomial vanishes identically')

    for k in range(p.degree + 1):
        if p.part_norm(k) > tol * scale:
            return k

    raise ZeroFunctionError(f'all coefficients below {tol:g} relative')


def homogeneous_part(p: TaylorPoly2, k: int) -> TaylorPoly2:
    if k < 0 or k > p.degree:
        raise DegreeError(f'no homogeneous part of degree {k} in a degree {p.degree} polynomial')

    return TaylorPoly2.from_array(p.homogeneous(k).coeffs, k)


def harmonic_pair(k: int) -> tuple[TaylorPoly2, TaylorPoly2]:
    '''
    Re(z^k) and Im(z^k) as polynomials in x1, x2.

    '''
    re = np.zeros((k + 1, k + 1))
    im = np.zeros((k + 1, k + 1))
    for m in range(k + 1):
        c = math.comb(k, m) * (-1) ** (m // 2)
        if m % 2:
            im[k - m, m] = c

        else:
            re[k - m, m] = c

    return TaylorPoly2(re, k), TaylorPoly2(im, k)


def is_harmonic(p: TaylorPoly2, tol: float = _HARMONIC_TOL) -> bool:
    scale = max(p.max_abs(), 1e-300)
    return p.laplacian().max_abs() <= tol * scale


class HarmonicLeading(NamedTuple):
    k: int
    beta: float
    phi: float

    def as_poly(self) -> TaylorPoly2:
        '''
        beta r^k sin(k t + k phi) expanded in x1, x2.

        '''
        re, im = harmonic_pair(self.k)
        kphi = self.k * self.phi
        return re * (self.beta * math.sin(kphi)) + im * (self.beta * math.cos(kphi))

    def __call__(self, x) -> np.ndarray | float:
        x = np.asarray(x, dtype=float)
        r = np.hypot(x[..., 0], x[..., 1])
        t = np.arctan2(x[..., 1], x[..., 0])
        return self.beta * r ** self.k * np.sin(self.k * (t + self.phi))


def beta_phi(h: TaylorPoly2, k: int | None = None) -> HarmonicLeading:
    '''
    Normal form ``h = beta r^k sin(k t + k phi)`` with ``k phi`` in
    ``(-pi/2, pi/2]``; beta carries the sign.

    '''
    if h.max_abs() == 0.:
        raise ZeroFunctionError('leading part vanishes identically')

    if k is None:
        k = vanishing_order(h)

    if k == 0:
        raise DegreeError('constants have no (beta, phi) normal form')

    part = homogeneous_part(h, k)
    rest = h - part
    if rest.max_abs() > _HARMONIC_TOL * h.max_abs():
        raise DegreeError(f'polynomial is not homogeneous of degree {k}')

    if not is_harmonic(part):
        raise NotHarmonicError(f'degree {k} part {part!r} is not harmonic')

    # coefficients of r^k cos(kt) and r^k sin(kt)
    a = float(part.coeffs[k, 0])
    b = float(part.coeffs[k - 1, 1]) / k
    if b != 0.:
        kphi = math.atan(a / b)
        beta = b / math.cos(kphi)

    else:
        kphi = math.pi / 2.
        beta = a

    return HarmonicLeading(k, beta, kphi / k)


def _area_nodes(degree: int, curve: ParamCurve) -> int:
    # integrand is a trigonometric polynomial, trapezoid is exact above this
    band = (degree + 2) * max(curve.modes, 1) + 1
    n = max(64, 2 * band + 2)
    return n + n % 2


def poly_area_integral(q: TaylorPoly2, omega: ParamCurve) -> float:
    '''
    ``int_omega q dx`` as ``oint Q nu_1 dsigma`` with ``d1 Q = q``.

    '''
    antider = npoly.polyint(q.coeffs, 1, axis=0)
    n = _area_nodes(q.degree, omega)
    t = omega.nodes(n)
    p = omega(t)
    d = omega.derivative(t, 1)
    values = npoly.polyval2d(p[:, 0], p[:, 1], antider)
    return float((2. * np.pi / n) * np.sum(values * d[:, 1]))


def gradient_square(h: TaylorPoly2) -> TaylorPoly2:
    g1 = h.derivative(1, 0)
    g2 = h.derivative(0, 1)
    return g1 * g1 + g2 * g2


def interior_gradient_energy(h: TaylorPoly2, omega: ParamCurve) -> float:
    return poly_area_integral(gradient_square(h), omega)


def area_integral(
    f: Callable[[np.ndarray], np.ndarray],
    omega: ParamCurve,
    *,
    n: int = 256,
    epsrel: float = 1e-10
) -> float:
    '''
    ``int_omega f dx`` for a smooth non polynomial ``f``: the inner
    antiderivative along x1 is an adaptive ``quad_vec`` over every boundary
    node at once, the outer periodic integral is the trapezoid rule.

    '''
    t = omega.nodes(n)
    p = omega(t)
    d = omega.derivative(t, 1)

    def inner(tau: float) -> np.ndarray:
        pts = np.stack([tau * p[:, 0], p[:, 1]], axis=-1)
        return p[:, 0] * np.asarray(f(pts), dtype=float)

    F, err = quad_vec(inner, 0., 1., epsrel=epsrel)
    if not np.all(np.isfinite(F)):
        raise DataError('area integrand produced non finite values')

    logger.debug(f'area integral: quad_vec error estimate {err:.3e}')
    return float((2. * np.pi / n) * np.sum(F * d[:, 1]))


def _central_weights(order: int) -> tuple[np.ndarray, np.ndarray]:
    q = (order + 1) // 2
    offsets = np.arange(-q, q + 1, dtype=float)
    if order == 0:
        return np.zeros(1), np.ones(1)

    V = np.vander(offsets, increasing=True).T
    rhs = np.zeros(len(offsets))
    rhs[order] = math.factorial(order)
    return offsets, np.linalg.solve(V, rhs)


def _fd_coefficients(fn, center: np.ndarray, degree: int, step: float) -> np.ndarray:
    out = np.zeros((degree + 1, degree + 1))
    cache: dict[tuple[float, float], float] = {}

    def value(i: float, j: float) -> float:
        key = (i, j)
        if key not in cache:
            x = center + step * np.array([i, j])
            cache[key] = float(fn(x))

        return cache[key]

    for h in range(degree + 1):
        oh, wh = _central_weights(h)
        for j in range(degree + 1 - h):
            oj, wj = _central_weights(j)
            total = 0.
            for a, wa in zip(oh, wh):
                for b, wb in zip(oj, wj):
                    total += wa * wb * value(a, b)

            out[h, j] = total / (step ** (h + j) * math.factorial(h) * math.factorial(j))

    return out


def taylor_from_function(
    fn: Callable[[np.ndarray], float],
    degree: int = 4,
    *,
    center=(0., 0.),
    step: float = 1e-2
) -> TaylorPoly2:
    '''
    Numerical Taylor coefficients of ``fn`` at ``center`` from product
    central difference stencils at steps ``step``, ``step/2`` and
    ``step/4`` and two Richardson levels (error terms h^2 and h^4).
    Accuracy tops out around 1e-7.

    '''
    if degree > 4:
        raise DegreeError(f'finite difference extraction supports degree <= 4, got {degree}')

    center = np.asarray(center, dtype=float)
    levels = [_fd_coefficients(fn, center, degree, step / 2 ** i) for i in range(3)]
    if not all(np.all(np.isfinite(c)) for c in levels):
        raise DataError('function returned non finite values near the center')

    first = [(4. * levels[i + 1] - levels[i]) / 3. for i in range(2)]
    coeffs = (16. * first[1] - first[0]) / 15.
    return TaylorPoly2.from_array(coeffs, degree)
