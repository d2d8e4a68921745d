"""Geometric-phase sweep machinery.

Sign convention under test: with the chart phase increasing along the
motion and total = dynamic + geometric, counter-clockwise loops give a
negative geometric phase whose magnitude matches the connection loop
integral; literature comparisons are therefore made in magnitude.
"""

import math

import numpy as np
import pytest

from hannay_vdp.dual_dynamics import Params
from hannay_vdp.geophase import (
    AdiabaticityError,
    check_adiabatic,
    convergence_study,
    frozen_grid,
    sweep,
)
from hannay_vdp.hannay import hannay_angle
from hannay_vdp.limit_cycle import measure
from hannay_vdp.loops import make_parametric_loop, make_square_loop
from tests.conftest import SQUARE_OMEGA0, cycles_to_T


def test_frozen_grid_frequency_at_square_corner(square_grid):
    # lambda(0.25) = (0.8, 0.1); series value 0.8 - 0.01/12.8 + eps^4 term
    expected = 0.8 - 0.01 / 12.8 + 17.0 * 1e-4 / (3072.0 * 0.8**3)
    assert abs(square_grid.frequency(0.25) - expected) <= 1e-5


def test_frozen_grid_interpolation_off_node(square_loop, square_grid):
    s = 0.1371
    w, e = square_loop(s)
    direct = measure(Params(w, e)).frequency
    assert abs(square_grid.frequency(s) - direct) <= 1e-9


def test_constant_loop_grid_entries_identical():
    loop = make_parametric_loop(lambda s: (0.8, 0.2))
    grid = frozen_grid(loop, n_s=8)
    freqs = [c.frequency for c in grid.cycles]
    assert np.ptp(freqs) <= 1e-12
    assert abs(grid.loop_mean_frequency() - freqs[0]) <= 1e-12


def test_degenerate_loop_has_zero_geometric_phase():
    loop = make_parametric_loop(lambda s: (0.8, 0.2))
    grid = frozen_grid(loop, n_s=8)
    res = sweep(loop, cycles_to_T(50, 0.8), grid=grid)
    assert abs(res.geometric_phase) <= 1e-6


def test_adiabaticity_guard():
    loop = make_square_loop(0.6, 0.8, 0.1, 0.3)
    with pytest.raises(AdiabaticityError):
        check_adiabatic(loop, 0.99 * 50.0 * 2.0 * math.pi / 0.6)
    check_adiabatic(loop, 50.0 * 2.0 * math.pi / 0.6)  # boundary passes


def test_phase_bookkeeping_is_exact(square_sweeps):
    for res in square_sweeps.values():
        assert res.total_phase == res.dynamic_phase + res.geometric_phase


def test_square_sweep_converges_to_connection_magnitude(square_loop,
                                                        square_sweeps):
    phi_h = hannay_angle(square_loop).phi_H
    res = square_sweeps[500]
    assert res.geometric_phase < 0.0  # ccw loop, increasing-phase chart
    assert abs(abs(res.geometric_phase) - 0.0103) <= 1e-3
    assert abs(abs(res.geometric_phase) - phi_h) <= 1.5e-3


def test_finite_T_error_shrinks_like_one_over_T(square_sweeps):
    # for err(T) ~ b/T the doubling differences psi(T) - psi(2T) = b/2T
    # halve as T doubles; corner-induced oscillations perturb the ratio
    p100 = square_sweeps[100].geometric_phase
    p200 = square_sweeps[200].geometric_phase
    p400 = square_sweeps[400].geometric_phase
    d1 = abs(p100 - p200)
    d2 = abs(p200 - p400)
    assert d2 < d1
    assert 1.2 <= d1 / d2 <= 3.0
    # fitted error against 1/T has positive slope
    ns = np.array([100.0, 200.0, 400.0])
    psis = np.array([p100, p200, p400])
    m = np.vstack([np.ones_like(ns), 1.0 / ns]).T
    (a, b), *_ = np.linalg.lstsq(m, psis, rcond=None)
    errs = np.abs(psis - a)
    assert np.polyfit(1.0 / ns, errs, 1)[0] > 0.0


def test_deviation_from_frozen_cycle_halves_with_T(square_sweeps):
    d100 = square_sweeps[100].max_cycle_deviation
    d200 = square_sweeps[200].max_cycle_deviation
    d400 = square_sweeps[400].max_cycle_deviation
    assert 1.4 <= d100 / d200 <= 2.6
    assert 1.4 <= d200 / d400 <= 2.6


def test_winding_number_matches_total_phase(square_sweeps):
    res = square_sweeps[500]
    assert res.winding_number == int(res.total_phase // (2.0 * math.pi))


def test_orientation_antisymmetry(square_loop, square_sweeps):
    # the residual sum decays ~ 1/T with oscillatory corner contributions;
    # 1000 cycles is comfortably inside the 2e-4 budget
    rev = square_loop.reversed()
    grid_r = frozen_grid(rev, n_s=64)
    T = cycles_to_T(1000, SQUARE_OMEGA0)
    res_r = sweep(rev, T, grid=grid_r)
    fwd = square_sweeps[1000].geometric_phase
    assert res_r.geometric_phase > 0.0
    assert abs(res_r.geometric_phase + fwd) <= 2e-4


def test_grid_refinement_stability(square_loop, square_grid):
    grid_fine = frozen_grid(square_loop, n_s=128)
    T = cycles_to_T(200, SQUARE_OMEGA0)
    a = sweep(square_loop, T, grid=square_grid)
    b = sweep(square_loop, T, grid=grid_fine)
    assert abs(a.geometric_phase - b.geometric_phase) <= 1e-5


def test_convergence_study_shapes_and_guard(square_loop, square_grid):
    rows = convergence_study(
        square_loop, [cycles_to_T(60, SQUARE_OMEGA0)], grid=square_grid)
    assert len(rows) == 1
    with pytest.raises(AdiabaticityError):
        convergence_study(square_loop, [10.0], grid=square_grid)
    with pytest.raises(ValueError):
        convergence_study(square_loop, [], grid=square_grid)


def test_ellipse_sweep_magnitude(ellipse_sweep_500):
    res = ellipse_sweep_500
    assert res.geometric_phase < 0.0
    assert abs(abs(res.geometric_phase) - 0.013) <= 1.5e-3
