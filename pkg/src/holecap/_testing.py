'''
Shared knobs and builders for the test-suite.

* `inside_ci`: true when running under a CI runner (``CI`` env var).
* `random_density(grid, rng)`: smooth periodic density with a few random
  Fourier modes, deterministic for a given `random.Random`.
* `random_star_curve(rng)`: random smooth star shaped trig curve around the
  origin.

'''
from __future__ import annotations

import os
import sys
import math
import random
import logging

from pathlib import Path

import numpy as np

from holecap.bem import BoundaryGrid
from holecap.geometry import (
    ParamCurve,
    make_circle,
    make_ellipse,
    make_trig_curve
)
from holecap.taylor import TaylorPoly2, harmonic_pair


logger = logging.getLogger(__name__)


inside_ci: bool = os.getenv('CI', '').lower() in ('1', 'true', 'yes')

default_max_examples: int = 10 if inside_ci else 50
default_test_deadline: int = 5 * 60 * 1000  # 5 min in ms

tests_dir = Path(__file__).parent.parent.parent / 'tests'

testing_cache_dir = (
    tests_dir / '.pytest-holecap'
    if sys.platform != 'win32'
    else Path(Path(sys.executable).anchor) / '.pytest-holecap'
)


def unit_disk() -> ParamCurve:
    return make_circle(1.)


def reference_hole(theta: float = 0.) -> ParamCurve:
    '''
    The ellipse with semi axes 3/4 and 1/2 used across the closed form
    checks, rotated by ``theta``.

    '''
    return make_ellipse(0.75, 0.5, theta)


def random_density(grid: BoundaryGrid, rng: random.Random, modes: int = 4) -> np.ndarray:
    t = grid.t
    out = np.full(grid.n, rng.uniform(-1., 1.))
    for j in range(1, modes + 1):
        out += rng.uniform(-1., 1.) * np.cos(j * t) / j ** 2
        out += rng.uniform(-1., 1.) * np.sin(j * t) / j ** 2

    return out


def random_star_curve(rng: random.Random, modes: int = 3, wobble: float = 0.15) -> ParamCurve:
    '''
    ``r(t) = 1 + small trig perturbation``, always star shaped around 0.

    '''
    amps = [rng.uniform(-wobble, wobble) / modes for _ in range(2 * modes)]
    n = 8 * modes + 8
    t = 2. * np.pi * np.arange(n) / n
    r = 1. + sum(
        amps[2 * i] * np.cos((i + 1) * t) + amps[2 * i + 1] * np.sin((i + 1) * t)
        for i in range(modes)
    )
    x, y = r * np.cos(t), r * np.sin(t)
    top = modes + 1
    fx, fy = np.fft.rfft(x) / n, np.fft.rfft(y) / n
    x_cos = [fx[0].real] + [2. * fx[j].real for j in range(1, top + 1)]
    x_sin = [0.] + [-2. * fx[j].imag for j in range(1, top + 1)]
    y_cos = [fy[0].real] + [2. * fy[j].real for j in range(1, top + 1)]
    y_sin = [0.] + [-2. * fy[j].imag for j in range(1, top + 1)]
    return make_trig_curve(x_cos, x_sin, y_cos, y_sin)


def random_harmonic(rng: random.Random, k: int) -> TaylorPoly2:
    '''
    ``a Re z^k + b Im z^k`` with random nonzero weight.

    '''
    re, im = harmonic_pair(k)
    angle = rng.uniform(0., 2. * math.pi)
    scale = rng.uniform(0.5, 2.)
    return re * (scale * math.cos(angle)) + im * (scale * math.sin(angle))
