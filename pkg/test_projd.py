#!/usr/bin/env python3
"""
Tests for projective 3-space over the dual numbers: canonical forms,
straight lines and the contact order of curves.
"""

import math
import sys

import numpy as np

from core.dualnum import DualNumber
from core.dualquat import EPS, I, J, ONE, DualQuaternion, Quaternion, dual_scale
from core.errors import (
    AllCoordinatesNull,
    CoincidentPoints,
    InvalidParams,
    NonInvertibleFactor,
    PointsDiffer,
)
from core.motionpoly import TrigMotion, make_basic_motion
from core.projd import (
    FD_MAX_ORDER,
    CurveEvaluator,
    canonicalize,
    connecting_lines,
    contact_order,
    line_family_dimension,
    proj_distance,
    proj_eq,
    same_line,
)


def test_canonical_form():
    print("[TEST 1] Canonical representatives...")
    base = np.array([1.0, 2.0, 0.0, -1.0, 0.0, 1.0, 0.5, 0.0])
    scaled = dual_scale(2.0, 3.0, base)
    point = canonicalize(scaled)
    assert point.pivot == 0
    assert np.allclose(point.as_array(), base)
    assert proj_eq(scaled, base)
    assert proj_distance(scaled, base) < 1e-12
    assert not proj_eq(base, np.array([1.0, 2.0, 0.0, -1.0, 0.1, 1.0, 0.5, 0.0]))

    shifted = canonicalize(np.array([0.0, 0.0, 4.0, 2.0, 1.0, 0.0, 2.0, 0.0]))
    assert shifted.pivot == 2
    try:
        canonicalize(EPS)
    except AllCoordinatesNull:
        print("[PASS] canonical forms and projective equality")
    else:
        raise AssertionError("ε has no invertible coordinate")


def test_connecting_lines():
    print("[TEST 2] Straight lines over the dual numbers...")
    line = connecting_lines(ONE, I, DualNumber(1.0), DualNumber(1.0))
    assert line.contains(ONE + I)
    assert line.contains(DualNumber(1.0, 1.0) * (ONE + 2.0 * I)), "dual multiples lie on the line"
    assert not line.contains(J)

    other = connecting_lines(ONE + I, ONE - I, DualNumber(1.0), DualNumber(1.0))
    assert same_line(line, other)

    for args, error in (
        ((ONE, DualNumber(2.0, 1.0) * ONE, 1.0, 1.0), CoincidentPoints),
        ((ONE, I, DualNumber(0.0, 1.0), 1.0), NonInvertibleFactor),
    ):
        try:
            connecting_lines(*args)
        except error:
            continue
        raise AssertionError(f"{error.__name__} expected")
    print("[PASS] membership, equality and rejected inputs")


def test_line_family_dimension():
    print("[TEST 3] Dimension of the connecting lines...")
    c = DualQuaternion(Quaternion(1.0, 0.5, 0.0, 0.0), Quaternion(0.0, 0.0, 1.0, 0.0))
    d = DualQuaternion(Quaternion(0.0, 1.0, -1.0, 0.3), Quaternion(0.2, 0.0, 0.0, 1.0))
    assert line_family_dimension(c, d) == 2
    assert line_family_dimension(c, d, DualNumber(1.3, -0.4), DualNumber(0.7, 2.0)) == 2
    null = DualQuaternion(Quaternion(), Quaternion(0.0, 1.0, 2.0, 0.0))
    assert line_family_dimension(c, null) == 1
    print("[PASS] two parameters, one when a point has no primal part")


def _tangent_half_angle(s):
    d1 = 2.0 / (1.0 + s * s)
    d2 = -4.0 * s / (1.0 + s * s) ** 2
    d3 = -4.0 / (1.0 + s * s) ** 2 + 16.0 * s * s / (1.0 + s * s) ** 3
    return 2.0 * math.atan(s), d1, d2, d3


def test_helical_darboux_contact():
    print("[TEST 4] Helical and Darboux motions at ω = 0...")
    p = 0.8
    helical = TrigMotion('helical', pitch=p).curve()
    darboux = TrigMotion('darboux', amplitude=p).curve()
    expected = {
        1: (helical, [0, 0, 0, 0.5, 0, 0, 0, -0.5 * p]),
        2: (helical, [-0.25, 0, 0, 0, 0.5 * p, 0, 0, 0]),
        3: (helical, [0, 0, 0, -0.125, 0, 0, 0, 0.375 * p]),
    }
    for order, (curve, value) in expected.items():
        assert np.allclose(curve.derivative(0.0, order), value, atol=1e-12), f"order {order}"
    assert np.allclose(darboux.derivative(0.0, 3), [0, 0, 0, -0.125, 0, 0, 0, 0.875 * p], atol=1e-12)
    assert contact_order(helical, darboux, 0.0, 0.0, 3) == 2
    other = TrigMotion('darboux', amplitude=1.5 * p).curve()
    assert contact_order(helical, other, 0.0, 0.0, 3) == 0
    print("[PASS] contact order 2 for equal pitch and amplitude, 0 otherwise")


def test_darboux_line_identity():
    print("[TEST 5] Darboux motion as a straight line...")
    p = 0.6
    trig = TrigMotion('darboux', amplitude=p)
    for omega in np.linspace(-3.0, 3.0, 100):
        half = 0.5 * omega
        factor = DualNumber(1.0, p * math.cos(half) ** 2)
        line_point = DualQuaternion(Quaternion(math.cos(half), 0.0, 0.0, math.sin(half)),
                                    Quaternion(p * math.cos(half)))
        assert (factor * trig(omega)).isclose(line_point, 1e-10)

    poly = make_basic_motion('darboux', amplitude=p).poly
    aligned = trig.curve().reparametrized(_tangent_half_angle)
    assert contact_order(poly.curve(), aligned, 0.3, 0.3, 3, tol=1e-8) == 3
    print("[PASS] the trigonometric and linear forms agree to third order")


def test_points_differ():
    print("[TEST 6] Curves through different points...")
    helical = TrigMotion('helical', pitch=1.0).curve()
    try:
        contact_order(helical, helical, 0.0, 1.0, 2)
    except PointsDiffer:
        print("[PASS] PointsDiffer raised")
    else:
        raise AssertionError("different base points accepted")


def test_high_order_contact():
    print("[TEST 7] Contact beyond the third order...")
    helical = TrigMotion('helical', pitch=0.8).curve()
    assert contact_order(helical, helical, 0.4, 0.4, 4) == 4
    assert contact_order(helical, helical, 0.4, 0.4, FD_MAX_ORDER) == FD_MAX_ORDER
    for max_m in (FD_MAX_ORDER + 1, -1):
        try:
            contact_order(helical, helical, 0.4, 0.4, max_m)
        except InvalidParams:
            continue
        raise AssertionError(f"max_m = {max_m} accepted for a trigonometric curve")

    darboux = make_basic_motion('darboux', amplitude=0.6).poly
    quartic = darboux * darboux * darboux * darboux
    assert contact_order(quartic.curve(), quartic.curve(), 0.3, 0.3, 10) == 10
    sampled = CurveEvaluator(quartic.curve().func)
    exact = quartic.curve().derivative(0.3, 4)
    stencil = sampled.derivative(0.3, 4)
    assert np.max(np.abs(stencil - exact)) <= 1e-3 * np.max(np.abs(exact)), "fourth-order stencil"
    print("[PASS] orders up to the stencil limit, InvalidParams beyond it")


if __name__ == '__main__':
    test_canonical_form()
    test_connecting_lines()
    test_line_family_dimension()
    test_helical_darboux_contact()
    test_darboux_line_identity()
    test_points_differ()
    test_high_order_contact()
    print("[SUCCESS] All tests passed!")
    sys.exit(0)
