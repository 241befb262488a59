import os
import math
import pytest

from holecap import CapacityContext
from holecap._testing import (
    inside_ci,
    testing_cache_dir,
    unit_disk,
    reference_hole
)
from holecap.capacity import u_capacity
from holecap.params import SolverParams
from holecap.series import capacity_series, eval_capacity_series
from holecap.taylor import TaylorPoly2


if 'PYTEST_XDIST_WORKER' in os.environ:
    pytest.skip(
        'benchmark module cant be run with xdist',
        allow_module_level=True
    )

if inside_ci:
    pytest.skip(
        'benchmark cant be run on CI',
        allow_module_level=True
    )


max_time: float = float(os.getenv('HOLECAP_MAX_TIME', str(2. * 60.)))

disk = unit_disk()
hole = reference_hole(math.pi / 6.)
dipole = TaylorPoly2.from_text('1 0 1')
ctx = CapacityContext(cache_path=testing_cache_dir)


@pytest.mark.benchmark(
    group='direct_capacity',
    max_time=max_time,
    disable_gc=True
)
@pytest.mark.parametrize(
    'n',
    (128, 256, 512),
    ids=('n128', 'n256', 'n512')
)
def test_direct_capacity(benchmark, n):
    '''
    Boundary element solve for a small elliptic hole at increasing
    resolution.

    '''
    params = SolverParams(n=n)

    # run benchmark
    value = benchmark(
        u_capacity,
        disk, hole, dipole, 0.05,
        params=params
    )

    # sanity check
    assert value > 0.


@pytest.mark.benchmark(
    group='capacity_series',
    max_time=max_time,
    disable_gc=True
)
@pytest.mark.parametrize(
    'order',
    (2, 4),
    ids=('order2', 'order4')
)
def test_capacity_series(benchmark, order):
    '''
    Full series coefficient table, computed from scratch every round.

    '''
    series = benchmark(
        capacity_series,
        disk, hole, dipole, order,
        params=SolverParams(n=128)
    )

    # sanity check against the cached copy
    _, cached = ctx.series_for('bench', disk, hole, dipole, order, params=SolverParams(n=128))
    assert eval_capacity_series(series, 0.05) == pytest.approx(
        eval_capacity_series(cached, 0.05), rel=1e-12)
