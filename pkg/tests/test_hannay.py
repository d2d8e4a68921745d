import math

import numpy as np
import pytest

from hannay_vdp.hannay import (
    NonSimpleLoopError,
    green_theorem_oracle,
    hannay_angle,
    square_loop_closed_form,
    vdp_connection,
)
from hannay_vdp.loops import (
    InvalidLoopError,
    make_ellipse_loop,
    make_parametric_loop,
    make_polyline_loop,
    make_square_loop,
    reference_ellipse_loop,
    reference_square_loop,
)

ELLIPSE_EXACT = math.pi * (4.0 / math.sqrt(15.0) - 1.0) / 8.0  # 0.0128788


def test_square_loop_construction_and_samples():
    sq = reference_square_loop()
    w0, e0 = sq(0.0)
    w1, e1 = sq(1.0)
    assert (w0, e0) == (0.6, 0.1)
    assert math.hypot(w1 - w0, e1 - e0) == 0.0
    assert sq(0.25) == (0.8, 0.1)
    assert sq(0.5) == (0.8, 0.3)
    assert sq.orientation() == 1.0


def test_ellipse_loop_reference_parameterization():
    el = reference_ellipse_loop()
    assert el(0.0) == pytest.approx((1.0, 0.1), abs=1e-15)
    assert el(0.25) == pytest.approx((0.8, 0.2), abs=1e-15)
    assert el.orientation() == 1.0


def test_invalid_loop_ranges_raise():
    with pytest.raises(InvalidLoopError):
        make_square_loop(0.8, 0.6, 0.1, 0.3)
    with pytest.raises(InvalidLoopError):
        make_square_loop(-0.1, 0.6, 0.1, 0.3)
    with pytest.raises(InvalidLoopError):
        make_ellipse_loop(0.8, 0.1, 0.0, 0.1)
    with pytest.raises(InvalidLoopError):
        # eps dips negative along this ellipse
        make_ellipse_loop(0.8, 0.05, 0.2, 0.1)
    with pytest.raises(InvalidLoopError):
        # omega crosses zero
        make_parametric_loop(
            lambda s: (0.2 + 0.3 * math.cos(2 * math.pi * s),
                       0.2 + 0.1 * math.sin(2 * math.pi * s)))


def test_square_hannay_angle_quadrature_and_closed_form():
    sq = reference_square_loop()
    res = hannay_angle(sq)
    closed = square_loop_closed_form(sq)
    assert closed == pytest.approx(0.2 / 8.0 * (1 / 0.6 - 1 / 0.8), rel=1e-15)
    assert abs(res.phi_H - closed) <= 1e-8
    assert abs(res.phi_H - 0.0104) <= 5e-5
    assert res.closed_form == closed


def test_green_oracle_matches_line_quadrature_on_square():
    sq = reference_square_loop()
    assert abs(green_theorem_oracle(sq) - hannay_angle(sq).phi_H) <= 1e-8


def test_ellipse_green_oracle_closed_form():
    el = reference_ellipse_loop()
    g = green_theorem_oracle(el)
    assert abs(g - ELLIPSE_EXACT) <= 1e-8
    assert abs(g - hannay_angle(el).phi_H) <= 1e-8


def test_zero_area_loop_vanishes():
    flat = make_polyline_loop([(0.7, 0.1), (0.9, 0.2), (0.7, 0.1)])
    assert abs(hannay_angle(flat).phi_H) <= 1e-12


def test_orientation_reversal_flips_sign_exactly():
    for loop in (reference_square_loop(), reference_ellipse_loop()):
        fwd = hannay_angle(loop).phi_H
        rev = hannay_angle(loop.reversed()).phi_H
        assert rev == pytest.approx(-fwd, rel=1e-12)
        assert green_theorem_oracle(loop.reversed()) == pytest.approx(
            -green_theorem_oracle(loop), rel=1e-10)


def test_reparameterization_invariance():
    def warp(s):
        return s + 0.15 * math.sin(2.0 * math.pi * s) / (2.0 * math.pi)

    el = reference_ellipse_loop()
    warped = make_parametric_loop(lambda s: el(warp(s)))
    assert abs(hannay_angle(warped).phi_H
               - hannay_angle(el).phi_H) <= 1e-10


def test_additivity_over_shared_edge():
    whole = make_square_loop(0.6, 0.8, 0.1, 0.3)
    left = make_square_loop(0.6, 0.7, 0.1, 0.3)
    right = make_square_loop(0.7, 0.8, 0.1, 0.3)
    total = hannay_angle(left).phi_H + hannay_angle(right).phi_H
    assert abs(total - hannay_angle(whole).phi_H) <= 1e-9


def test_smooth_parametric_line_vs_green():
    loop = make_parametric_loop(
        lambda s: (0.8 + 0.15 * math.cos(2 * math.pi * s)
                   + 0.03 * math.cos(4 * math.pi * s),
                   0.15 + 0.08 * math.sin(2 * math.pi * s)))
    assert abs(hannay_angle(loop).phi_H
               - green_theorem_oracle(loop)) <= 1e-8


def test_non_simple_loop_rejected():
    bowtie = make_polyline_loop(
        [(0.6, 0.1), (0.8, 0.3), (0.8, 0.1), (0.6, 0.3)])
    with pytest.raises(NonSimpleLoopError):
        green_theorem_oracle(bowtie)


def test_pluggable_connection_with_fd_curl():
    def conn(w, e):
        return (-e / (8.0 * w * w), 0.05 * w * e)

    el = make_ellipse_loop(0.9, 0.2, 0.1, 0.08)
    line = hannay_angle(el, conn=conn).phi_H
    green = green_theorem_oracle(el, conn=conn)
    assert abs(line - green) <= 1e-7


def test_connection_default_values():
    a1, a2 = vdp_connection(0.7, 0.2)
    assert a1 == pytest.approx(-0.05102040816326531)
    assert a2 == 0.0
