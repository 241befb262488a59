import math

import pytest
from deepdiff import DeepDiff

from holecap.capacity import u_capacity
from holecap.errors import ComplexityGuardError, ValidityError
from holecap.geometry import make_circle, make_ellipse
from holecap.harmonic import r0
from holecap.params import SolverParams
from holecap.series import (
    CapacitySeries,
    capacity_series,
    eval_capacity_series,
    leading_energy,
    leading_capacity,
    condenser_leading,
    compositions,
    hash_engine
)
from holecap.series import coefficients
from holecap.series.ladder import composition_sum
from holecap.taylor import TaylorPoly2, harmonic_pair


one = TaylorPoly2.constant(1.)
x1 = TaylorPoly2.from_text('1 0 1')


@pytest.fixture(scope='module')
def annulus_series():
    return capacity_series(make_circle(2.), make_circle(1.), one, 3, 128)


def test_concentric_disk_series_degenerates(annulus_series):
    series = annulus_series
    assert series.order == 3
    assert series.r0 == pytest.approx(-math.log(2.) / (2. * math.pi), abs=1e-9)
    assert series.c(0, 0) == pytest.approx(0., abs=1e-10)
    assert series.c(0, 1) == pytest.approx(-1., abs=1e-10)
    for n, l, c, _ in series.records():
        if (n, l) != (0, 1):
            assert abs(c) <= 1e-8, (n, l, c)


@pytest.mark.parametrize('eps', [0.05, 0.1])
def test_concentric_disk_series_value(annulus_series, eps):
    value = eval_capacity_series(annulus_series, eps)
    assert value == pytest.approx(2. * math.pi / math.log(2. / eps), abs=1e-7)


def test_one_term_series_arithmetic():
    series = CapacitySeries(r0=0., coeffs=((0., -1.),))
    assert eval_capacity_series(series, 0.1) == pytest.approx(2. * math.pi / math.log(10.))
    assert condenser_leading(0., 0.1) == pytest.approx(2. * math.pi / math.log(10.))

    zero = CapacitySeries(r0=0., coeffs=((0., 0.), (0., 0., 0.)))
    assert eval_capacity_series(zero, 0.3) == 0.


def test_log_guard():
    # r0 + log(eps)/(2 pi) vanishes at eps = exp(-2 pi r0)
    series = CapacitySeries(r0=0.5, coeffs=((0., -1.),))
    eps = math.exp(-math.pi)
    with pytest.raises(ValidityError):
        eval_capacity_series(series, eps)

    with pytest.raises(ValidityError):
        eval_capacity_series(series, 1.5)


def test_series_round_trips_through_dict(annulus_series):
    back = CapacitySeries.from_dict(annulus_series.as_dict())
    assert back == annulus_series
    assert not DeepDiff(back.as_dict(), annulus_series.as_dict(), significant_digits=15)

    with pytest.raises(ValueError):
        CapacitySeries.from_dict({'r0': 0., 'coeffs': [[0., 1., 2.]]})


def test_order_guard():
    with pytest.raises(ComplexityGuardError):
        capacity_series(make_circle(2.), make_circle(1.), one, 7, 64)


def test_dipole_series_against_direct(memory_guard):
    Omega, omega = make_circle(2.), make_circle(1.)
    series, ladder = capacity_series(Omega, omega, x1, 3, 128, with_ladder=True)

    assert ladder.g[0] == pytest.approx(0., abs=1e-12)
    assert ladder.xi[2] == pytest.approx(math.pi, rel=1e-10)

    # vanishing order 1: nothing below eps^2, then the leading energy
    for n in range(2):
        for l in range(n + 2):
            assert abs(series.c(n, l)) <= 1e-8
    assert series.c(2, 0) == pytest.approx(2. * math.pi, rel=1e-7)
    assert series.c(2, 1) == pytest.approx(0., abs=1e-8)

    for eps in (0.02, 0.05):
        exact = 2. * math.pi * eps ** 2 / (1. - eps ** 2 / 4.)
        approx = eval_capacity_series(series, eps)
        assert abs(approx - exact) <= 2. * math.pi * eps ** 4
        direct = u_capacity(Omega, omega, x1, eps, 128)
        assert direct == pytest.approx(exact, rel=1e-8)


def test_ladder_xi_on_ellipse():
    series, ladder = capacity_series(
        make_circle(4.), make_ellipse(3., 2.), x1, 2, 128, with_ladder=True)
    assert ladder.xi[2] == pytest.approx(6. * math.pi, rel=1e-10)
    # the ladder constant r_0 and the direct Robin difference agree
    assert ladder.r[0] == pytest.approx(series.r0, abs=1e-8)
    assert series.r0 == pytest.approx(r0(make_circle(4.), make_ellipse(3., 2.), 128), abs=1e-12)


def test_grid_refinement_stability(memory_guard):
    Omega, omega = make_ellipse(3., 2.), make_ellipse(0.75, 0.5, 0.4)
    u = TaylorPoly2.from_text('0 0 1; 1 0 0.5; 0 1 -0.25')
    coarse = capacity_series(Omega, omega, u, 2, 128)
    fine = capacity_series(Omega, omega, u, 2, 256)
    assert coarse.r0 == pytest.approx(fine.r0, rel=1e-9)
    for (n, l, a, _), (_, _, b, _) in zip(coarse.records(), fine.records()):
        assert a == pytest.approx(b, rel=1e-7, abs=1e-9), (n, l)

    assert fine.c(0, 1) == pytest.approx(-1., abs=1e-9)


@pytest.mark.parametrize(
    'k, beta, expected',
    [(1, 1., 2. * math.pi), (1, 0.5, 0.5 * math.pi), (2, 1., 4. * math.pi)]
)
def test_leading_energy_disk(k, beta, expected):
    lead = harmonic_pair(k)[0] * beta
    energy = leading_energy(make_circle(1.), lead, 128)
    assert energy.k == k
    assert energy.total == pytest.approx(expected, rel=1e-9)
    assert energy.exterior == pytest.approx(energy.interior, rel=1e-9)
    assert energy.limit == pytest.approx(0., abs=1e-12)

    eps = 0.01
    assert leading_capacity(energy, 0., eps) == pytest.approx(expected * eps ** (2 * k))


def test_compositions():
    assert sorted(compositions(4, 2)) == [(1, 3), (2, 2), (3, 1)]
    assert list(compositions(0, 0)) == [()]
    assert list(compositions(2, 3)) == []
    # r = (r0, 1, 1, ...) counts compositions: C(k-1, l-1)
    assert composition_sum([0., 1., 1., 1., 1.], 4, 2) == 3.


def test_hash_engine_is_stable():
    assert hash_engine() == hash_engine()
    assert len(hash_engine(as_bytes=False)) == 64


def test_equilibrium_tolerance_reaches_the_hole_density(monkeypatch):
    seen = []
    solve = coefficients.equilibrium_density

    def recording(grid, **kwargs):
        seen.append(kwargs)
        return solve(grid, **kwargs)

    monkeypatch.setattr(coefficients, 'equilibrium_density', recording)
    params = SolverParams(n=64, equilibrium_tol=1e-4, cond_warn=1e9)
    series = capacity_series(make_circle(2.), make_circle(1.), one, 1, params=params)

    assert seen == [{'tol': 1e-4, 'cond_warn': 1e9}]
    assert series.provenance['n'] == 64
