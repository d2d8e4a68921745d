"""Shared expensive fixtures: frozen grids and reference sweeps.

Session-scoped so the geophase property tests and the acceptance suite
reuse the same measurements.
"""

import math
import time

import pytest

from hannay_vdp.geophase import frozen_grid, sweep
from hannay_vdp.loops import reference_ellipse_loop, reference_square_loop

SQUARE_OMEGA0 = 0.6
ELLIPSE_OMEGA0 = 1.0


def cycles_to_T(n_cycles, omega0):
    return n_cycles * 2.0 * math.pi / omega0


@pytest.fixture(scope="session")
def square_loop():
    return reference_square_loop()


@pytest.fixture(scope="session")
def ellipse_loop():
    return reference_ellipse_loop()


# wall-clock cost of the shared measurements, for acceptance budgets
TIMINGS = {}


@pytest.fixture(scope="session")
def fixture_timings():
    return TIMINGS


def _timed(key, fn):
    t0 = time.perf_counter()
    out = fn()
    TIMINGS[key] = TIMINGS.get(key, 0.0) + time.perf_counter() - t0
    return out


@pytest.fixture(scope="session")
def square_grid(square_loop):
    return _timed("square_grid", lambda: frozen_grid(square_loop, n_s=64))


@pytest.fixture(scope="session")
def ellipse_grid(ellipse_loop):
    return _timed("ellipse_grid", lambda: frozen_grid(ellipse_loop, n_s=64))


@pytest.fixture(scope="session")
def square_sweeps(square_loop, square_grid):
    """Sweeps of the reference square at 100..1000 cycles of omega(0)."""
    out = {}
    for n in (100, 200, 400, 500, 1000):
        key = "square_sweep_500" if n == 500 else f"square_sweep_{n}"
        out[n] = _timed(key, lambda n=n: sweep(
            square_loop, cycles_to_T(n, SQUARE_OMEGA0), grid=square_grid))
    return out


@pytest.fixture(scope="session")
def ellipse_sweep_500(ellipse_loop, ellipse_grid):
    return _timed("ellipse_sweep_500", lambda: sweep(
        ellipse_loop, cycles_to_T(500, ELLIPSE_OMEGA0), grid=ellipse_grid))
