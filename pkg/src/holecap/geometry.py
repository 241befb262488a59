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
Smooth closed planar curves given by finite trigonometric series.

Every curve, ellipses included, is stored as a coefficient array ``coeffs``
of shape ``(2, 2, m + 1)`` indexed ``[coordinate][cos | sin][mode]`` so

    gamma(t) = sum_k coeffs[:, 0, k] cos(k t) + coeffs[:, 1, k] sin(k t)

Derivatives are exact, all curves are counterclockwise after construction
(clockwise input is re-parametrized with ``t -> -t``).

'''
from __future__ import annotations

import logging

from pathlib import Path
from typing import NamedTuple
from dataclasses import dataclass

import numpy as np

from holecap.errors import (
    UsageError,
    InvalidGeometryError,
    OnBoundaryError
)
from holecap.params import default_param_trig_modes
from holecap.sanitize import (
    parse_number,
    parse_pairs,
    parse_rows
)


logger = logging.getLogger(__name__)


_CHECK_NODES = 256
_WINDING_NODES = 1024
_SIMPLICITY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ParamCurve:
    kind: str
    coeffs: np.ndarray
    a: float | None = None
    b: float | None = None
    theta: float = 0.
    center: tuple[float, float] = (0., 0.)

    @property
    def modes(self) -> int:
        return self.coeffs.shape[-1] - 1

    def _basis(self, t: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
        k = np.arange(self.modes + 1)
        kt = np.multiply.outer(t, k)
        c, s = np.cos(kt), np.sin(kt)
        # d^order/dt^order of cos/sin cycles with period 4
        scale = k.astype(float) ** order
        match order % 4:
            case 0:
                return c * scale, s * scale
            case 1:
                return -s * scale, c * scale
            case 2:
                return -c * scale, -s * scale
            case _:
                return s * scale, -c * scale

    def derivative(self, t, order: int = 0) -> np.ndarray:
        '''
        ``order``-th derivative of gamma at parameters ``t``, shape
        ``t.shape + (2,)``.

        '''
        t = np.asarray(t, dtype=float)
        cb, sb = self._basis(t, order)
        x = cb @ self.coeffs[0, 0] + sb @ self.coeffs[0, 1]
        y = cb @ self.coeffs[1, 0] + sb @ self.coeffs[1, 1]
        return np.stack([x, y], axis=-1)

    def __call__(self, t) -> np.ndarray:
        return self.derivative(t, 0)

    def nodes(self, n: int) -> np.ndarray:
        return 2. * np.pi * np.arange(n) / n

    def sample(self, n: int) -> np.ndarray:
        return self(self.nodes(n))

    def as_bytes(self) -> bytes:
        return (
            self.kind.encode() +
            np.ascontiguousarray(self.coeffs, dtype='<f8').tobytes()
        )

    def __repr__(self) -> str:
        if self.kind == 'ellipse':
            return (
                f'ParamCurve(ellipse a={self.a:g} b={self.b:g} '
                f'theta={self.theta:g} center={self.center})'
            )

        return f'ParamCurve(trig modes={self.modes})'


class CurvePoint(NamedTuple):
    point: np.ndarray
    normal: np.ndarray
    speed: np.ndarray
    curvature: np.ndarray


def point_normal_speed(curve: ParamCurve, t) -> CurvePoint:
    '''
    Point, unit outward normal, speed ``|gamma'|`` and signed curvature
    (positive on convex counterclockwise arcs) at ``t``.

    '''
    p = curve.derivative(t, 0)
    d1 = curve.derivative(t, 1)
    d2 = curve.derivative(t, 2)

    speed = np.hypot(d1[..., 0], d1[..., 1])
    normal = np.stack([d1[..., 1], -d1[..., 0]], axis=-1) / speed[..., None]
    curvature = (d1[..., 0] * d2[..., 1] - d1[..., 1] * d2[..., 0]) / speed ** 3
    return CurvePoint(p, normal, speed, curvature)


def _signed_area_of(coeffs: np.ndarray) -> float:
    # 1/2 int (x y' - y x') dt picks the k >= 1 modes: pi * k * (xc ys - xs yc)
    k = np.arange(coeffs.shape[-1])
    return float(np.pi * np.sum(
        k * (coeffs[0, 0] * coeffs[1, 1] - coeffs[0, 1] * coeffs[1, 0])
    ))


def signed_area(curve: ParamCurve) -> float:
    return _signed_area_of(curve.coeffs)


def centroid(curve: ParamCurve, n: int = _CHECK_NODES) -> np.ndarray:
    t = curve.nodes(n)
    p = curve(t)
    d = curve.derivative(t, 1)
    area = signed_area(curve)
    dt = 2. * np.pi / n
    cx = dt * np.sum(p[:, 0] ** 2 * d[:, 1]) / (2. * area)
    cy = -dt * np.sum(p[:, 1] ** 2 * d[:, 0]) / (2. * area)
    return np.array([cx, cy])


def diameter(curve: ParamCurve, n: int = _CHECK_NODES) -> float:
    p = curve.sample(n)
    diff = p[:, None, :] - p[None, :, :]
    return float(np.sqrt(np.max(np.sum(diff ** 2, axis=-1))))


def max_radius(curve: ParamCurve, n: int = _CHECK_NODES) -> float:
    '''
    Largest distance of the curve from the origin.

    '''
    return float(np.max(np.hypot(*curve.sample(n).T)))


def _segments_cross(p: np.ndarray) -> bool:
    '''
    True if any two non adjacent edges of the closed polygon ``p`` cross.

    '''
    a = p
    b = np.roll(p, -1, axis=0)

    def orient(u, v, w):
        return (
            (v[..., 0] - u[..., 0]) * (w[..., 1] - u[..., 1]) -
            (v[..., 1] - u[..., 1]) * (w[..., 0] - u[..., 0])
        )

    A, B = a[:, None, :], b[:, None, :]
    C, D = a[None, :, :], b[None, :, :]
    d1 = orient(A, B, C)
    d2 = orient(A, B, D)
    d3 = orient(C, D, A)
    d4 = orient(C, D, B)
    cross = (d1 * d2 < 0) & (d3 * d4 < 0)

    m = len(p)
    idx = np.arange(m)
    gap = np.abs(idx[:, None] - idx[None, :])
    adjacent = (gap <= 1) | (gap == m - 1)
    return bool(np.any(cross & ~adjacent))


def _validate(coeffs: np.ndarray, kind: str):
    if not np.all(np.isfinite(coeffs)):
        raise InvalidGeometryError(f'{kind} curve has non finite coefficients')

    probe = ParamCurve(kind=kind, coeffs=coeffs)
    t = probe.nodes(_CHECK_NODES)
    pts = probe(t)
    speed = np.hypot(*probe.derivative(t, 1).T)
    diam = diameter(probe)
    if diam <= 0.:
        raise InvalidGeometryError(f'{kind} curve collapses to a point')

    if np.min(speed) <= _SIMPLICITY_TOL * diam:
        raise InvalidGeometryError(
            f'{kind} curve has vanishing speed (min {np.min(speed):.3e})'
        )

    # non adjacent nodes must stay apart, and no polygon edges may cross
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt(np.sum(diff ** 2, axis=-1))
    m = len(pts)
    idx = np.arange(m)
    gap = np.abs(idx[:, None] - idx[None, :])
    far = np.minimum(gap, m - gap) > 1
    if np.any(dist[far] <= _SIMPLICITY_TOL * diam) or _segments_cross(pts):
        raise InvalidGeometryError(f'{kind} curve is not simple')


def make_ellipse(
    a: float,
    b: float,
    theta: float = 0.,
    center=(0., 0.)
) -> ParamCurve:
    '''
    t -> center + R_theta (a cos t, b sin t)

    '''
    a, b, theta = float(a), float(b), float(theta)
    if not (np.isfinite(a) and np.isfinite(b)) or a <= 0. or b <= 0.:
        raise InvalidGeometryError(
            f'ellipse semi-axes must be positive, got a={a}, b={b}'
        )

    if b > a:
        raise InvalidGeometryError(
            f'ellipse needs a >= b (rotate by pi/2 instead), got a={a}, b={b}'
        )

    cx, cy = (float(v) for v in center)
    ct, st = np.cos(theta), np.sin(theta)
    coeffs = np.zeros((2, 2, 2))
    coeffs[0, 0, 0], coeffs[1, 0, 0] = cx, cy
    coeffs[0, 0, 1], coeffs[0, 1, 1] = a * ct, -b * st
    coeffs[1, 0, 1], coeffs[1, 1, 1] = a * st, b * ct
    return ParamCurve(
        kind='ellipse',
        coeffs=coeffs,
        a=a, b=b, theta=theta,
        center=(cx, cy)
    )


def make_circle(radius: float, center=(0., 0.)) -> ParamCurve:
    return make_ellipse(radius, radius, 0., center)


def make_trig_curve(
    x_cos, x_sin, y_cos, y_sin,
    *,
    max_modes: int = default_param_trig_modes
) -> ParamCurve:
    '''
    Build a curve from per coordinate cosine/sine coefficient lists (index =
    mode, ``*_sin[0]`` is ignored). Modes above ``max_modes`` are dropped.

    '''
    rows = [np.atleast_1d(np.asarray(v, dtype=float)) for v in (x_cos, x_sin, y_cos, y_sin)]
    m = max(len(r) for r in rows) - 1
    if m > max_modes:
        logger.warning(f'Truncating trig curve from {m} to {max_modes} modes')
        m = max_modes

    coeffs = np.zeros((2, 2, m + 1))
    for (i, j), row in zip(((0, 0), (0, 1), (1, 0), (1, 1)), rows):
        row = row[:m + 1]
        coeffs[i, j, :len(row)] = row

    coeffs[:, 1, 0] = 0.

    if m < 1:
        raise InvalidGeometryError('trig curve needs at least one mode')

    area = _signed_area_of(coeffs)
    if area == 0.:
        raise InvalidGeometryError('trig curve encloses no area')

    if area < 0.:
        logger.debug('Reversing clockwise trig curve')
        coeffs[:, 1, :] *= -1.

    _validate(coeffs, 'trig')
    return ParamCurve(kind='trig', coeffs=coeffs)


def _from_coeffs(curve: ParamCurve, coeffs: np.ndarray, **meta) -> ParamCurve:
    return ParamCurve(
        kind=curve.kind,
        coeffs=coeffs,
        a=meta.get('a', curve.a),
        b=meta.get('b', curve.b),
        theta=meta.get('theta', curve.theta),
        center=meta.get('center', curve.center)
    )


def scale_about_origin(curve: ParamCurve, eps: float) -> ParamCurve:
    eps = float(eps)
    if not np.isfinite(eps) or eps <= 0.:
        raise InvalidGeometryError(f'scale factor must be positive, got {eps}')

    if eps == 1.:
        return curve

    return _from_coeffs(
        curve, curve.coeffs * eps,
        a=None if curve.a is None else curve.a * eps,
        b=None if curve.b is None else curve.b * eps,
        center=(curve.center[0] * eps, curve.center[1] * eps)
    )


def translate(curve: ParamCurve, v) -> ParamCurve:
    vx, vy = (float(c) for c in v)
    coeffs = curve.coeffs.copy()
    coeffs[0, 0, 0] += vx
    coeffs[1, 0, 0] += vy
    return _from_coeffs(
        curve, coeffs,
        center=(curve.center[0] + vx, curve.center[1] + vy)
    )


def rotate(curve: ParamCurve, angle: float) -> ParamCurve:
    '''
    Rotate about the origin by ``angle``.

    '''
    c, s = np.cos(angle), np.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    coeffs = np.einsum('ij,jkm->ikm', rot, curve.coeffs)
    center = rot @ np.asarray(curve.center)
    return _from_coeffs(
        curve, coeffs,
        theta=curve.theta + angle,
        center=(float(center[0]), float(center[1]))
    )


def closest_point(curve: ParamCurve, p, n: int = _WINDING_NODES) -> tuple[float, float]:
    '''
    Return ``(t, distance)`` of the point of ``curve`` nearest to ``p``,
    node search refined by Newton on ``(gamma - p) . gamma'``.

    '''
    p = np.asarray(p, dtype=float)
    t_nodes = curve.nodes(n)
    d2 = np.sum((curve(t_nodes) - p) ** 2, axis=-1)
    t = float(t_nodes[np.argmin(d2)])
    h = 2. * np.pi / n
    for _ in range(30):
        r = curve(t) - p
        d1 = curve.derivative(t, 1)
        dd = curve.derivative(t, 2)
        f = r @ d1
        fp = d1 @ d1 + r @ dd
        if fp <= 0.:
            break

        step = float(np.clip(f / fp, -h, h))
        t -= step
        if abs(step) < 1e-15:
            break

    return t % (2. * np.pi), float(np.linalg.norm(curve(t) - p))


def winding_contains(
    curve: ParamCurve,
    p,
    tol: float | None = None
) -> bool:
    '''
    True iff the winding number of ``curve`` around ``p`` is 1.

    '''
    p = np.asarray(p, dtype=float)
    if tol is None:
        tol = _SIMPLICITY_TOL * diameter(curve)

    t_star, dist = closest_point(curve, p)
    if dist <= tol:
        raise OnBoundaryError(f'point {tuple(p)} lies on the curve (distance {dist:.3e})')

    pts = curve.sample(_WINDING_NODES)
    chord = np.max(np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=-1))
    if dist < 2. * chord:
        # polygon too coarse this close, use the side of the nearest point
        cp = point_normal_speed(curve, t_star)
        return bool((p - cp.point) @ cp.normal < 0.)

    z = (pts[:, 0] - p[0]) + 1j * (pts[:, 1] - p[1])
    turns = np.sum(np.angle(np.roll(z, -1) / z)) / (2. * np.pi)
    return int(np.rint(turns)) == 1


def _read_spec(text: str) -> str:
    text = text.strip()
    if text.startswith('@'):
        path = Path(text[1:])
        if not path.is_file():
            raise UsageError(f'curve spec file {path} not found')

        return path.read_text().strip()

    return text


def parse_curve_spec(
    text: str,
    *,
    max_modes: int = default_param_trig_modes
) -> ParamCurve:
    '''
    Accepted forms::

        ellipse:3,2                     circle:1
        ellipse:0.75,0.5,theta=pi/4,cx=0,cy=0
        kind=ellipse a=3 b=2 theta=0 cx=0 cy=0
        kind=trig; 0 0 0 0 0; 1 1 0 0 1     (rows: mode xc xs yc ys)

    A leading ``@`` reads the spec from a file.

    '''
    text = _read_spec(text)

    if text.startswith(('ellipse:', 'circle:')):
        shape, rest = text.split(':', 1)
        parts = [p.strip() for p in rest.split(',') if p.strip()]
        positional = [p for p in parts if '=' not in p]
        named = parse_pairs(','.join(p for p in parts if '=' in p), 'curve spec')
        want = 2 if shape == 'ellipse' else 1
        if len(positional) != want:
            raise UsageError(f'{shape} spec expects {want} positional values: "{text}"')

        extra = set(named) - {'theta', 'cx', 'cy'}
        if extra:
            raise UsageError(f'unknown curve spec keys: {", ".join(sorted(extra))}')

        axes = [parse_number(p, 'semi-axis') for p in positional]
        if shape == 'circle':
            axes = axes * 2

        return make_ellipse(
            axes[0], axes[1],
            parse_number(named.get('theta', '0'), 'theta'),
            (
                parse_number(named.get('cx', '0'), 'cx'),
                parse_number(named.get('cy', '0'), 'cy')
            )
        )

    head, _, body = text.replace('\n', ';').partition(';')
    pairs = parse_pairs(head, 'curve spec', sep=None)
    kind = pairs.pop('kind', None)

    if kind == 'ellipse':
        extra = set(pairs) - {'a', 'b', 'theta', 'cx', 'cy'}
        if extra or 'a' not in pairs or 'b' not in pairs:
            raise UsageError(f'ellipse spec needs a and b only: "{text}"')

        return make_ellipse(
            parse_number(pairs['a'], 'a'),
            parse_number(pairs['b'], 'b'),
            parse_number(pairs.get('theta', '0'), 'theta'),
            (
                parse_number(pairs.get('cx', '0'), 'cx'),
                parse_number(pairs.get('cy', '0'), 'cy')
            )
        )

    if kind == 'trig':
        if pairs:
            raise UsageError(f'trig spec takes no keys besides kind: "{text}"')

        rows = parse_rows(body, 5, 'trig curve')
        top = 0
        for row in rows:
            if row[0] < 0 or row[0] != int(row[0]):
                raise UsageError(f'trig mode {row[0]} is not a non negative integer')

            top = max(top, int(row[0]))

        table = np.zeros((4, top + 1))
        for mode, *values in rows:
            table[:, int(mode)] = values

        return make_trig_curve(*table, max_modes=max_modes)

    raise UsageError(f'unknown curve kind in "{text}"')
