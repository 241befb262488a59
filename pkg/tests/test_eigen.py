import math
import logging

import numpy as np
import pytest
from scipy import special

from holecap.eigen import (
    classify_order,
    scaling_exponent,
    EigPrediction,
    predict,
    predict_shift,
    normalized_shift,
    interior_grid,
    optimal_location_max,
    optimal_location_min
)
from holecap.errors import ValidityError, ZeroFunctionError
from holecap.geometry import make_circle, make_ellipse
from holecap.spectra import (
    disk_mode,
    disk_eigenfunction_taylor,
    annulus_eigenvalues
)
from holecap.taylor import TaylorPoly2
from holecap.utils import richardson


unit_disk = make_circle(1.)


def taylor_for(mode):
    def at(p):
        return disk_eigenfunction_taylor(mode, p, 4)

    return at


def test_classify_order():
    almost = TaylorPoly2.from_text('0 0 1e-8; 1 0 1')
    assert classify_order(almost, 1e-6) == 1
    assert classify_order(almost, 1e-9) == 0
    assert scaling_exponent(TaylorPoly2.from_text('1 1 2')) == (2, 'eps^4', 4)
    assert scaling_exponent(TaylorPoly2.constant(0.5)) == (0, '1/|log eps|', None)

    with pytest.raises(ZeroFunctionError):
        classify_order(TaylorPoly2.zero(3), 1e-6)


def test_prediction_arithmetic():
    pred = EigPrediction(lambda_N=10., point=(0., 0.), k=0, coefficient=2.)
    assert pred.regime == 'log'
    assert pred.exponent is None
    assert pred.shift(0.01) == pytest.approx(2. * 2. * math.pi / math.log(100.))
    assert pred.eigenvalue(0.01) == pytest.approx(10. + pred.shift(0.01))

    power = EigPrediction(lambda_N=10., point=(0., 0.), k=2, coefficient=3.)
    assert power.regime == 'power'
    assert power.exponent == 4
    assert power.shift(0.1) == pytest.approx(3e-4)
    record = power.as_dict([0.1])
    assert record['shifts'][0]['eigenvalue'] == pytest.approx(10.0003)

    for eps in (0., 1., -0.1):
        with pytest.raises(ValidityError):
            pred.shift(eps)

    assert normalized_shift(2., 1., 0.1, 2) == pytest.approx(100.)


def test_predict_ground_state():
    mode = disk_mode(0)
    u = disk_eigenfunction_taylor(mode)
    pred = predict(mode.eigenvalue, u, unit_disk)
    assert pred.k == 0
    assert pred.coefficient == pytest.approx(1.0868 ** 2, abs=1e-3)
    assert pred.shift(1e-3) == pytest.approx(1.0744, abs=1e-3)
    assert predict_shift(mode.eigenvalue, u, unit_disk, 1e-3) == pytest.approx(
        mode.eigenvalue + pred.shift(1e-3))


def test_predict_first_excited_mode(caplog):
    mode = disk_mode(1)
    u = disk_eigenfunction_taylor(mode, (0., 0.), 8)
    with caplog.at_level(logging.WARNING, logger='holecap.eigen'):
        pred = predict(mode.eigenvalue, u, unit_disk, spectrum=[mode.eigenvalue] * 2)

    assert 'not simple' in caplog.text
    assert pred.k == 1
    expected = mode.zero ** 2 / special.jv(2, mode.zero) ** 2
    assert pred.coefficient == pytest.approx(expected, rel=1e-6)


def test_ground_mode_against_annulus():
    mode = disk_mode(0)
    pred = predict(mode.eigenvalue, disk_eigenfunction_taylor(mode), unit_disk)
    eps = 1e-3
    (exact,) = annulus_eigenvalues(eps, 0, 1)
    shift = exact - mode.eigenvalue
    # logarithmic remainder of order 1 / log(eps)
    assert abs(shift - pred.shift(eps)) / shift <= 0.25


def test_dipole_mode_against_annulus():
    mode = disk_mode(1)
    pred = predict(mode.eigenvalue, disk_eigenfunction_taylor(mode, (0., 0.), 8), unit_disk)
    eps_grid = [3e-3, 1e-2]
    ratios = [
        (annulus_eigenvalues(eps, 1, 1)[0] - mode.eigenvalue) / pred.shift(eps)
        for eps in eps_grid
    ]
    assert richardson(ratios, eps_grid, 2) == pytest.approx(1., abs=0.05)


def test_interior_grid():
    grid = interior_grid(unit_disk, 4)
    assert grid.spacing == pytest.approx(0.5)
    pts = {tuple(np.round(p, 12)) for p in grid.points}
    assert (0., 0.) in pts
    assert (0.5, 0.5) in pts
    assert (1., 0.) not in pts
    assert np.all(grid.distance > 0.)

    tight = interior_grid(unit_disk, 5, margin=0.4)
    assert len(tight.points) < len(grid.points)
    assert np.all(tight.distance > 0.4)


@pytest.mark.parametrize('workers', [1, 4])
def test_max_location_ground_mode(workers):
    loc = optimal_location_max(disk_mode(0), unit_disk, 21, workers=workers)
    assert loc.point == pytest.approx((0., 0.), abs=1e-12)
    assert loc.unique
    assert not loc.degenerate
    assert loc.value == pytest.approx(disk_mode(0)((0., 0.)) ** 2)


def test_max_location_ties():
    flat = optimal_location_max(lambda p: 1., unit_disk, 5)
    assert flat.degenerate
    assert len(flat.ties) > 1


def test_min_location_ground_mode_has_no_nodes():
    mode = disk_mode(0)
    loc = optimal_location_min(mode, unit_disk, unit_disk, 11, taylor_at=taylor_for(mode))
    assert loc.k == 0
    assert loc.candidates == ()
    assert 'logarithmic' in loc.advisory


def test_min_location_dipole_mode_has_no_minimizer():
    mode = disk_mode(1)
    loc = optimal_location_min(mode, unit_disk, make_circle(1.), 21, taylor_at=taylor_for(mode))
    assert loc.k == 1
    assert loc.advisory is not None
    assert loc.advisory.startswith('no minimizer')
    # every candidate sits on the nodal line x1 = 0
    assert all(abs(c.point[0]) <= 1e-12 for c in loc.candidates)
    energies = [c.energy for c in loc.candidates]
    assert energies == sorted(energies)


@pytest.mark.parametrize('workers', [1, 4])
def test_min_location_quadrupole_mode(workers, memory_guard):
    mode = disk_mode(2)
    loc = optimal_location_min(
        mode, unit_disk, make_ellipse(0.75, 0.5), 21,
        taylor_at=taylor_for(mode), workers=workers
    )
    assert loc.k == 2
    assert len(loc.candidates) == 1
    assert loc.candidates[0].point == pytest.approx((0., 0.), abs=1e-12)
    assert loc.candidates[0].energy > 0.
    assert loc.advisory is None
