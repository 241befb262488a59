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
``holecap`` command line: direct and series capacities, closed form and
boundary element energies, eigenvalue predictions against the annulus
oracle, (eps, theta, p) sweeps and hole placement.

Every command writes deterministic output: JSON records (one per line) or
CSV with 17 significant digits, rows in grid order whatever the worker
count. Failures print a single JSON line ``{"error": code, "message": ...}``
to stderr and exit with 2 (usage), 3 (numeric validity) or 4 (geometry).

'''
from __future__ import annotations

import io
import os
import sys
import csv
import json
import math
import logging
import argparse

from pathlib import Path
from dataclasses import dataclass

import numpy as np

from holecap import CapacityContext
from holecap.capacity import condenser_capacity, u_capacity
from holecap.eigen import (
    classify_order,
    predict,
    normalized_shift,
    scaling_exponent,
    optimal_location_max,
    optimal_location_min
)
from holecap.elliptic import (
    angular_energy,
    exterior_energy_closed_form,
    interior_energy_closed_form,
    rotated_leading,
    xi_bar
)
from holecap.errors import (
    HoleCapError,
    UsageError,
    NumericValidityError,
    CircleDegenerateError,
    DegreeError
)
from holecap.geometry import (
    ParamCurve,
    make_circle,
    parse_curve_spec,
    rotate,
    translate
)
from holecap.harmonic import r0 as harmonic_r0
from holecap.params import (
    SolverParams,
    load_config_file,
    resolve_params
)
from holecap.sanitize import (
    parse_int,
    parse_grid,
    parse_pairs,
    parse_number,
    parse_rows
)
from holecap.series import (
    CapacitySeries,
    capacity_series,
    eval_capacity_series,
    leading_energy,
    leading_capacity
)
from holecap.spectra import (
    DiskMode,
    disk_mode,
    disk_eigenvalues,
    disk_eigenfunction_taylor,
    annulus_eigenvalues
)
from holecap.taylor import (
    Evaluable,
    AnalyticFunction,
    TaylorPoly2,
    HarmonicLeading,
    beta_phi,
    homogeneous_part
)
from holecap.templates import render_lineplot
from holecap.utils import (
    fmt_float,
    loglog_slope,
    ordered_map,
    richardson,
    worker_count
)


logger = logging.getLogger(__name__)


CSV_COLUMNS = [
    'epsilon', 'theta', 'px', 'py',
    'value_direct', 'value_series', 'value_leading',
    'abs_gap', 'rel_gap', 'slope_local', 'mu'
]

_DEFAULT_HOLE = 'ellipse:0.75,0.5'
_DEFAULT_EPS_GRID = '1.5^-k,k=4..14'
_OFF_CENTER_DEGREE = 4


class ArgParser(argparse.ArgumentParser):

    def error(self, message: str):
        raise UsageError(message)


# boundary datum specs

def parse_mode(text: str) -> DiskMode:
    '''
    ``m=1,n=1,R=1,parity=cos``, every key optional except ``m``.

    '''
    pairs = parse_pairs(text, 'mode spec')
    extra = set(pairs) - {'m', 'n', 'R', 'parity'}
    if extra:
        raise UsageError(f'mode spec: unknown key(s) {", ".join(sorted(extra))}')

    if 'm' not in pairs:
        raise UsageError(f'mode spec "{text}" needs m=')

    return disk_mode(
        m=parse_int(pairs['m'], 'mode m'),
        n=parse_int(pairs.get('n', '1'), 'mode n'),
        R=parse_number(pairs.get('R', '1'), 'mode R'),
        parity=pairs.get('parity', 'cos')
    )


@dataclass(frozen=True)
class Datum:
    '''
    Boundary datum ``u`` given either as a polynomial or as a disk mode.

    '''
    spec: str
    poly: TaylorPoly2 | None = None
    mode: DiskMode | None = None

    def evaluable(self, p=(0., 0.)) -> Evaluable:
        '''
        ``u(x + p)``, the datum in the frame centered at ``p``.

        '''
        p = np.asarray(p, dtype=float)
        if self.poly is not None:
            return self.poly.shift(p) if np.any(p) else self.poly

        mode = self.mode
        if not np.any(p):
            return mode

        return AnalyticFunction(
            lambda x: mode(np.asarray(x) + p),
            lambda x: mode.gradient(np.asarray(x) + p),
            name=f'{self.spec}@({p[0]:g},{p[1]:g})'
        )

    def taylor(self, p=(0., 0.), degree: int = _OFF_CENTER_DEGREE) -> TaylorPoly2:
        p = np.asarray(p, dtype=float)
        if self.poly is not None:
            return self.poly.shift(p) if np.any(p) else self.poly

        if np.any(p) and degree > _OFF_CENTER_DEGREE:
            raise DegreeError(
                f'mode data off the center has Taylor degree {_OFF_CENTER_DEGREE} only, '
                f'series order {degree} needs degree {degree}'
            )

        return disk_eigenfunction_taylor(self.mode, p, degree)


def parse_datum(text: str) -> Datum:
    text = text.strip()
    if text.startswith('poly:'):
        body = text[5:].strip().strip('"\'')
        return Datum(spec=text, poly=TaylorPoly2.from_text(body))

    if text.startswith('mode:'):
        return Datum(spec=text, mode=parse_mode(text[5:]))

    raise UsageError(f'u spec "{text}" must start with poly: or mode:')


def parse_points(text: str) -> list[tuple[float, float]]:
    return [(row[0], row[1]) for row in parse_rows(text, 2, 'point')]


def _datum_from_args(args, required: bool = True) -> Datum | None:
    if getattr(args, 'mode', None):
        if getattr(args, 'u', None):
            raise UsageError('give either --u or --mode, not both')

        return Datum(spec=f'mode:{args.mode}', mode=parse_mode(args.mode))

    if getattr(args, 'u', None):
        return parse_datum(args.u)

    if required:
        raise UsageError('a boundary datum is required (--u or --mode)')

    return None


def _outer_from_args(args, datum: Datum | None, params: SolverParams) -> ParamCurve:
    if args.outer:
        return parse_curve_spec(args.outer, max_modes=params.trig_modes)

    if datum is not None and datum.mode is not None:
        return make_circle(datum.mode.R)

    raise UsageError('--outer is required unless u is a disk mode')


# output helpers

def _emit(record: dict, out):
    out.write(json.dumps(record, sort_keys=True) + '\n')


def _leading_record(energy) -> dict:
    return {
        'k': energy.k,
        'exterior': energy.exterior,
        'interior': energy.interior,
        'total': energy.total,
        'limit': energy.limit
    }


def _normal_form(poly: TaylorPoly2) -> HarmonicLeading | None:
    try:
        return beta_phi(poly)

    except NumericValidityError:
        return None


# commands

def cmd_cap_direct(args, params: SolverParams, out) -> int:
    Omega = parse_curve_spec(args.outer, max_modes=params.trig_modes)
    omega = parse_curve_spec(args.hole, max_modes=params.trig_modes)
    datum = _datum_from_args(args, required=False)
    p = tuple(args.point)
    Omega = translate(Omega, (-p[0], -p[1]))

    for eps in parse_grid(args.eps, 'eps'):
        if datum is None:
            value = condenser_capacity(Omega, omega, eps, params=params)
            kind = 'condenser'

        else:
            value = u_capacity(Omega, omega, datum.evaluable(p), eps, params=params)
            kind = 'u'

        _emit({
            'command': 'cap-direct',
            'kind': kind,
            'eps': eps,
            'px': p[0], 'py': p[1],
            'n': params.n,
            'value': value
        }, out)

    return 0


def _series(
    args,
    params: SolverParams,
    Omega: ParamCurve,
    omega: ParamCurve,
    u: TaylorPoly2,
    order: int,
    name: str
) -> CapacitySeries:
    cache = args.cache or os.getenv('HOLECAP_CACHE')
    if cache:
        ctx = CapacityContext(cache_path=cache, params=params)
        _, series = ctx.series_for(name, Omega, omega, u, order)
        return series

    return capacity_series(Omega, omega, u, order, params=params)


def cmd_cap_series(args, params: SolverParams, out) -> int:
    Omega = parse_curve_spec(args.outer, max_modes=params.trig_modes)
    omega = parse_curve_spec(args.hole, max_modes=params.trig_modes)
    datum = _datum_from_args(args)
    p = tuple(args.point)
    Omega = translate(Omega, (-p[0], -p[1]))
    u = datum.taylor(p, max(args.order, _OFF_CENTER_DEGREE))

    series = _series(args, params, Omega, omega, u, args.order, 'cap-series')
    values = [
        {'eps': eps, 'value': eval_capacity_series(series, eps, guard=params.log_guard)}
        for eps in (parse_grid(args.eps, 'eps') if args.eps else [])
    ]
    _emit({
        'command': 'cap-series',
        'r0': series.r0,
        'order': series.order,
        'records': [rec._asdict() for rec in series.records()],
        'values': values
    }, out)
    return 0


def cmd_leading_energy(args, params: SolverParams, out) -> int:
    omega = parse_curve_spec(args.hole, max_modes=params.trig_modes)
    datum = _datum_from_args(args)
    u = datum.taylor(tuple(args.point))
    k = classify_order(u, params.classify_tol)
    lead = homogeneous_part(u, k)
    energy = leading_energy(omega, lead, params=params)

    record = {'command': 'leading-energy', **_leading_record(energy)}
    form = _normal_form(lead) if k else None
    record['beta'] = None if form is None else form.beta
    record['phi'] = None if form is None else form.phi
    _emit(record, out)
    return 0


def cmd_elliptic_energy(args, params: SolverParams, out) -> int:
    a, b = args.a, args.b
    datum = _datum_from_args(args, required=False)
    if datum is not None:
        u = datum.taylor(tuple(args.point))
        k = classify_order(u, params.classify_tol)
        if k == 0:
            raise UsageError('u does not vanish at the hole center, no angular energy')

        form = rotated_leading(homogeneous_part(u, k), args.theta)

    else:
        if args.k is None or args.beta is None:
            raise UsageError('give --u/--mode or both --k and --beta')

        form = HarmonicLeading(args.k, args.beta, args.phi + args.theta)

    try:
        xi = xi_bar(a, b)

    except CircleDegenerateError:
        xi = None

    _emit({
        'command': 'elliptic-energy',
        'k': form.k,
        'beta': form.beta,
        'phi': form.phi,
        'theta': args.theta,
        'xi_bar': xi,
        'exterior': exterior_energy_closed_form(form.k, form.beta, form.phi, a, b),
        'interior': interior_energy_closed_form(form.k, form.beta, a, b),
        'total': angular_energy(form.k, form.beta, form.phi, a, b)
    }, out)
    return 0


def _disk_spectrum(mode: DiskMode) -> list[float]:
    return [m.eigenvalue for m in disk_eigenvalues(mode.R, 50)]


def cmd_predict(args, params: SolverParams, out) -> int:
    mode = parse_mode(args.mode)
    omega = parse_curve_spec(args.hole, max_modes=params.trig_modes)
    p = tuple(args.point)
    u = disk_eigenfunction_taylor(
        mode, p, 8 if not any(p) else _OFF_CENTER_DEGREE)

    prediction = predict(
        mode.eigenvalue, u, omega,
        point=p, params=params, spectrum=_disk_spectrum(mode)
    )
    regime = scaling_exponent(u, params.classify_tol)
    eps = parse_grid(args.eps, 'eps') if args.eps else []
    _emit({
        'command': 'predict',
        'mode': mode.label(),
        'regime_label': regime.label,
        'asymptotic_only': True,
        **prediction.as_dict(eps)
    }, out)
    return 0


def cmd_annulus_check(args, params: SolverParams, out) -> int:
    mode = parse_mode(args.mode)
    eps_grid = sorted(parse_grid(args.eps, 'eps'))
    u = disk_eigenfunction_taylor(mode, (0., 0.), 8)
    prediction = predict(mode.eigenvalue, u, make_circle(1.), params=params)

    rows = []
    for eps in eps_grid:
        exact = annulus_eigenvalues(eps / mode.R, mode.m, mode.n, mode.R)[-1]
        shift_exact = exact - mode.eigenvalue
        shift_pred = prediction.shift(eps)
        rows.append({
            'eps': eps,
            'exact': exact,
            'predicted': prediction.eigenvalue(eps),
            'shift_exact': shift_exact,
            'shift_predicted': shift_pred,
            'rel_error': abs(shift_exact - shift_pred) / abs(shift_exact)
        })

    record = {
        'command': 'annulus-check',
        'mode': mode.label(),
        'lambda_N': mode.eigenvalue,
        'k': prediction.k,
        'regime': prediction.regime,
        'coefficient': prediction.coefficient,
        'rows': rows,
        'slope': None,
        'ratio_extrapolated': None
    }
    if len(rows) >= 2:
        record['slope'], _ = loglog_slope(
            [r['eps'] for r in rows], [r['shift_exact'] for r in rows])
        if prediction.k >= 1:
            record['ratio_extrapolated'] = richardson(
                [r['shift_exact'] / r['shift_predicted'] for r in rows],
                [r['eps'] for r in rows],
                2
            )

    _emit(record, out)
    return 0


@dataclass(frozen=True)
class SweepGroup:
    theta: float
    point: tuple[float, float]


def _sweep_group(
    group: SweepGroup,
    *,
    Omega: ParamCurve,
    omega: ParamCurve,
    datum: Datum,
    eps_grid: list[float],
    params: SolverParams,
    order: int,
    alpha: float | None,
    want_direct: bool,
    want_series: bool
) -> list[dict]:
    p = group.point
    hole = rotate(omega, group.theta)
    outer = translate(Omega, (-p[0], -p[1]))
    u_eval = datum.evaluable(p)
    u_taylor = datum.taylor(p, max(order if want_series else 0, _OFF_CENTER_DEGREE))

    k = classify_order(u_taylor, params.classify_tol)
    lead = leading_energy(hole, homogeneous_part(u_taylor, k), params=params)
    r0 = harmonic_r0(outer, hole, params.n, cond_warn=params.cond_warn)
    series = (
        capacity_series(outer, hole, u_taylor, order, params=params)
        if want_series else None
    )
    power = alpha if alpha is not None else (2 * k if k else None)

    rows = []
    for eps in eps_grid:
        direct = u_capacity(outer, hole, u_eval, eps, params=params) if want_direct else None
        value_series = (
            eval_capacity_series(series, eps, guard=params.log_guard)
            if series is not None else None
        )
        value_leading = leading_capacity(lead, r0, eps, guard=params.log_guard)

        gap = rel = None
        if direct is not None and value_series is not None:
            gap = abs(direct - value_series)
            rel = gap / abs(direct) if direct else None

        best = next(v for v in (direct, value_series, value_leading) if v is not None)
        rows.append({
            'epsilon': eps,
            'theta': group.theta,
            'px': p[0],
            'py': p[1],
            'value_direct': direct,
            'value_series': value_series,
            'value_leading': value_leading,
            'abs_gap': gap,
            'rel_gap': rel,
            'slope_local': None,
            'mu': None if power is None else normalized_shift(best, 0., eps, power),
            '_best': best
        })

    if len(rows) >= 2:
        order_idx = np.argsort([r['epsilon'] for r in rows])
        le = np.log([rows[i]['epsilon'] for i in order_idx])
        lv = np.log(np.abs([rows[i]['_best'] for i in order_idx]))
        slopes = np.gradient(lv, le)
        for i, s in zip(order_idx, slopes):
            rows[i]['slope_local'] = float(s)

    logger.debug(f'sweep group theta={group.theta:g} p={p}: k={k}, {len(rows)} rows')
    return rows


def sweep_rows(
    Omega: ParamCurve,
    omega: ParamCurve,
    datum: Datum,
    eps_grid: list[float],
    thetas: list[float],
    points: list[tuple[float, float]],
    params: SolverParams,
    *,
    order: int = 2,
    alpha: float | None = None,
    want_direct: bool = True,
    want_series: bool = True,
    workers: int | None = None
) -> list[dict]:
    '''
    One row per ``(theta, p, eps)`` in that nesting order.

    '''
    if want_series and datum.mode is not None and order > _OFF_CENTER_DEGREE:
        if any(np.any(np.asarray(p, dtype=float)) for p in points):
            raise DegreeError(
                f'mode data off the center has Taylor degree {_OFF_CENTER_DEGREE} only, '
                f'series order {order} needs degree {order}'
            )

    groups = [SweepGroup(theta, p) for theta in thetas for p in points]

    def job(group: SweepGroup) -> list[dict]:
        return _sweep_group(
            group,
            Omega=Omega, omega=omega, datum=datum, eps_grid=eps_grid,
            params=params, order=order, alpha=alpha,
            want_direct=want_direct, want_series=want_series
        )

    results = ordered_map(job, groups, worker_count(workers))
    return [row for rows in results for row in rows]


def write_csv(rows: list[dict], out):
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([fmt_float(row[c]) for c in CSV_COLUMNS])


def write_svgs(rows: list[dict], prefix: Path):
    loglog: dict[str, list] = {}
    mu: dict[str, list] = {}
    for row in rows:
        tag = f'theta={row["theta"]:.4g} p=({row["px"]:g},{row["py"]:g})'
        if row['_best']:
            loglog.setdefault(tag, []).append(
                (math.log10(row['epsilon']), math.log10(abs(row['_best']))))

        if row['mu'] is not None:
            mu.setdefault(f'eps={row["epsilon"]:.4g}', []).append((row['theta'], row['mu']))

    prefix.parent.mkdir(parents=True, exist_ok=True)
    Path(f'{prefix}-loglog.svg').write_text(render_lineplot(
        loglog, title='capacity vs eps', xlabel='log10 eps', ylabel='log10 capacity'))
    if mu:
        Path(f'{prefix}-mu.svg').write_text(render_lineplot(
            mu, title='normalized shift', xlabel='theta', ylabel='mu'))


def cmd_sweep(args, params: SolverParams, out) -> int:
    datum = _datum_from_args(args)
    Omega = _outer_from_args(args, datum, params)
    omega = parse_curve_spec(args.hole, max_modes=params.trig_modes)
    eps_grid = parse_grid(args.eps_grid, 'eps grid')
    count = args.theta_grid
    if count < 1:
        raise UsageError('--theta-grid needs at least one angle')

    thetas = [0.] if count == 1 else [
        (j / (count - 1)) * (math.pi / 2.) for j in range(count)
    ]
    points = parse_points(args.points)

    rows = sweep_rows(
        Omega, omega, datum, eps_grid, thetas, points, params,
        order=args.order,
        alpha=args.alpha,
        want_direct=not args.no_direct,
        want_series=not args.no_series,
        workers=args.workers
    )

    if args.out:
        with open(args.out, 'w', newline='') as f:
            write_csv(rows, f)

    else:
        write_csv(rows, out)

    if args.svg:
        write_svgs(rows, Path(args.svg))

    return 0


def cmd_optimal_hole(args, params: SolverParams, out) -> int:
    mode = parse_mode(args.mode)
    Omega = make_circle(mode.R)
    if args.objective == 'max':
        loc = optimal_location_max(
            mode, Omega, args.resolution, margin=args.margin, workers=args.workers)
        _emit({
            'command': 'optimal-hole',
            'objective': 'max',
            'mode': mode.label(),
            'point': list(loc.point),
            'value': loc.value,
            'ties': [list(t) for t in loc.ties],
            'unique': loc.unique,
            'degenerate': loc.degenerate
        }, out)
        return 0

    omega = parse_curve_spec(args.hole, max_modes=params.trig_modes)
    loc = optimal_location_min(
        mode, Omega, omega, args.resolution,
        margin=args.margin,
        params=params,
        taylor_at=lambda p: disk_eigenfunction_taylor(mode, p, _OFF_CENTER_DEGREE),
        workers=args.workers
    )
    _emit({
        'command': 'optimal-hole',
        'objective': 'min',
        'mode': mode.label(),
        'k': loc.k,
        'candidates': [
            {'point': list(c.point), 'k': c.k, 'energy': c.energy}
            for c in loc.candidates
        ],
        'advisory': loc.advisory
    }, out)
    return 0


# parser

def _point(text: str) -> tuple[float, float]:
    rows = parse_rows(text, 2, 'point')
    if len(rows) != 1:
        raise UsageError(f'expected a single point, got "{text}"')

    return rows[0][0], rows[0][1]


def _number(text: str) -> float:
    return parse_number(text, 'value')


def build_parser() -> ArgParser:
    common = ArgParser(add_help=False)
    common.add_argument('--n', type=int, default=None, help='boundary nodes per curve')
    common.add_argument('--max-n', type=int, default=None)
    common.add_argument('--log-guard', type=float, default=None)
    common.add_argument('--config', default=None, help='key = value solver config file')
    common.add_argument('--cache', default=None, help='series cache directory')
    common.add_argument('--workers', type=int, default=None)
    common.add_argument(
        '--log-level', default='WARNING',
        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR']
    )

    parser = ArgParser(prog='holecap', description=__doc__.split('\n\n')[0].strip())
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('cap-direct', parents=[common], help='boundary element capacity')
    p.add_argument('--outer', required=True)
    p.add_argument('--hole', required=True)
    p.add_argument('--u', default=None, help='omit for the condenser capacity')
    p.add_argument('--eps', required=True)
    p.add_argument('--point', type=_point, default=(0., 0.))
    p.set_defaults(fn=cmd_cap_direct)

    p = sub.add_parser('cap-series', parents=[common], help='capacity series coefficients')
    p.add_argument('--outer', required=True)
    p.add_argument('--hole', required=True)
    p.add_argument('--u', default=None)
    p.add_argument('--mode', default=None)
    p.add_argument('--order', type=int, default=2)
    p.add_argument('--eps', default=None)
    p.add_argument('--point', type=_point, default=(0., 0.))
    p.set_defaults(fn=cmd_cap_series)

    p = sub.add_parser('leading-energy', parents=[common], help='energy of the leading term')
    p.add_argument('--hole', required=True)
    p.add_argument('--u', default=None)
    p.add_argument('--mode', default=None)
    p.add_argument('--point', type=_point, default=(0., 0.))
    p.set_defaults(fn=cmd_leading_energy)

    p = sub.add_parser('elliptic-energy', parents=[common], help='closed form for an elliptic hole')
    p.add_argument('--a', type=_number, required=True)
    p.add_argument('--b', type=_number, required=True)
    p.add_argument('--k', type=int, default=None)
    p.add_argument('--beta', type=_number, default=None)
    p.add_argument('--phi', type=_number, default=0.)
    p.add_argument('--theta', type=_number, default=0.)
    p.add_argument('--u', default=None)
    p.add_argument('--mode', default=None)
    p.add_argument('--point', type=_point, default=(0., 0.))
    p.set_defaults(fn=cmd_elliptic_energy)

    p = sub.add_parser('predict', parents=[common], help='eigenvalue shift prediction on a disk')
    p.add_argument('--mode', required=True)
    p.add_argument('--hole', default='circle:1')
    p.add_argument('--point', type=_point, default=(0., 0.))
    p.add_argument('--eps', default=None)
    p.set_defaults(fn=cmd_predict)

    p = sub.add_parser('annulus-check', parents=[common], help='prediction vs exact annulus spectrum')
    p.add_argument('--mode', required=True)
    p.add_argument('--eps', required=True)
    p.set_defaults(fn=cmd_annulus_check)

    p = sub.add_parser('sweep', parents=[common], help='(eps, theta, p) grid to CSV')
    p.add_argument('--outer', default=None)
    p.add_argument('--hole', default=_DEFAULT_HOLE)
    p.add_argument('--u', default=None)
    p.add_argument('--mode', default=None)
    p.add_argument('--eps-grid', default=_DEFAULT_EPS_GRID)
    p.add_argument('--theta-grid', type=int, default=11)
    p.add_argument('--points', default='0 0')
    p.add_argument('--order', type=int, default=2)
    p.add_argument('--alpha', type=_number, default=None)
    p.add_argument('--no-direct', action='store_true')
    p.add_argument('--no-series', action='store_true')
    p.add_argument('--out', default=None, help='CSV path, stdout if omitted')
    p.add_argument('--svg', default=None, help='prefix for SVG plots')
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser('optimal-hole', parents=[common], help='hole placement on a disk')
    p.add_argument('--mode', required=True)
    p.add_argument('--hole', default='circle:1')
    p.add_argument('--objective', choices=['max', 'min'], default='max')
    p.add_argument('--resolution', type=int, default=41)
    p.add_argument('--margin', type=_number, default=0.)
    p.set_defaults(fn=cmd_optimal_hole)

    return parser


def _params_from_args(args) -> SolverParams:
    config = load_config_file(args.config) if args.config else None
    return resolve_params(
        {'n': args.n, 'max_n': args.max_n, 'log_guard': args.log_guard},
        config
    )


def _report(e: BaseException, code: str, err) -> None:
    message = str(e).replace('\n', ' ')
    err.write(json.dumps({'error': code, 'message': message}) + '\n')


def run(
    argv: list[str] | None = None,
    out=None,
    err=None,
    *,
    configure_logging: bool = False
) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if configure_logging:
            logging.basicConfig(
                level=getattr(logging, args.log_level),
                stream=err,
                format='%(levelname)s %(name)s: %(message)s'
            )

        params = _params_from_args(args)
        logger.info(f'running {args.command} with {params.as_dict()}')
        return args.fn(args, params, out)

    except HoleCapError as e:
        _report(e, e.code, err)
        return e.exit_status

    except OSError as e:
        _report(e, 'io', err)
        return 1


def main():
    sys.exit(run(sys.argv[1:], configure_logging=True))


def run_to_string(argv: list[str]) -> tuple[int, str, str]:
    '''
    Run a command capturing stdout and stderr.

    '''
    out, err = io.StringIO(), io.StringIO()
    status = run(argv, out, err)
    return status, out.getvalue(), err.getvalue()
