from __future__ import annotations

import os
import logging

from typing import Callable, Iterable, TypeVar
from concurrent.futures import ThreadPoolExecutor

import numpy as np


logger = logging.getLogger(__name__)


T = TypeVar('T')
R = TypeVar('R')


if os.name == "nt":
    # Win32
    import msvcrt

    def fd_lock(fd, exclusive: bool):
        mode = msvcrt.LK_NBLCK if exclusive else msvcrt.LK_NBRLCK
        msvcrt.locking(fd, mode, 1)

    def fd_unlock(fd):
        msvcrt.locking(fd, msvcrt.LK_UNLCK, 1)

else:
    # POSIX
    import fcntl

    def fd_lock(fd, exclusive: bool):
        flag = fcntl.LOCK_EX if exclusive else fcntl.LOCK_SH
        fcntl.flock(fd, flag)

    def fd_unlock(fd):
        fcntl.flock(fd, fcntl.LOCK_UN)


def worker_count(requested: int | None = None) -> int:
    '''
    Number of worker threads to use, ``HOLECAP_THREADS`` caps whatever was
    requested (default: cpu count).

    '''
    count = requested if requested else (os.cpu_count() or 1)

    env_cap = os.getenv('HOLECAP_THREADS')
    if env_cap:
        try:
            count = min(count, max(int(env_cap), 1))

        except ValueError:
            logger.warning(f'Ignoring malformed HOLECAP_THREADS={env_cap!r}')

    return max(count, 1)


def ordered_map(
    fn: Callable[[T], R],
    items: Iterable[T],
    workers: int = 1
) -> list[R]:
    '''
    Map ``fn`` over ``items`` on a thread pool, results in input order.

    '''
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def fmt_float(value: float | None) -> str:
    '''
    Fixed 17 significant digit rendering, empty string for missing values.

    '''
    if value is None:
        return ''

    value = float(value)
    if not np.isfinite(value):
        return str(value)

    return format(value, '.17g')


def richardson(
    values: Iterable[float],
    steps: Iterable[float],
    order: float
) -> float:
    '''
    One Richardson step over the two smallest ``steps`` assuming an error
    term proportional to ``step ** order``.

    '''
    pairs = sorted(zip(steps, values))
    if len(pairs) < 2:
        raise ValueError('richardson needs at least two samples')

    (h0, v0), (h1, v1) = pairs[0], pairs[1]
    w0, w1 = h0 ** order, h1 ** order
    return (v0 * w1 - v1 * w0) / (w1 - w0)


def loglog_slope(
    x: Iterable[float],
    y: Iterable[float]
) -> tuple[float, float]:
    '''
    Least squares fit of ``log|y| = slope * log x + intercept``, returns
    ``(slope, exp(intercept))``.

    '''
    lx = np.log(np.asarray(list(x), dtype=float))
    ly = np.log(np.abs(np.asarray(list(y), dtype=float)))
    if lx.size < 2:
        raise ValueError('need at least two points to fit a slope')

    slope, intercept = np.polyfit(lx, ly, 1)
    return float(slope), float(np.exp(intercept))
