#!/usr/bin/env python3
"""
Tests for cylinder developments, the sine fit and osculating Darboux
motions.
"""

import math
import sys

import numpy as np

from core.errors import StationaryAngle
from core.osculate import (
    CylinderMotion,
    ScalarFunction,
    develop,
    osculating_darboux,
    sine_fit,
)
from core.plot import development_svg
from core.projd import contact_order


def test_sine_fit():
    print("[TEST 1] Sine fit...")
    fit = sine_fit(0.0, -1.0)
    assert math.isclose(fit.a, 1.0) and math.isclose(fit.phi, math.pi / 2)
    fit = sine_fit(1.0, -1.0)
    assert math.isclose(fit.a, 3.0) and math.isclose(fit.phi, math.atan2(2 * math.sqrt(2), 1.0))
    fit = sine_fit(0.3, 0.7)
    assert math.isclose(fit.slope(), 0.3) and math.isclose(fit.curvature(), 0.7)
    assert 0.0 <= fit.phi < 2 * math.pi
    zero = sine_fit(0.0, 0.0)
    assert zero.a == 0.0 and zero.phi == 0.0
    print("[PASS] amplitude and phase reproduce slope and curvature")


def test_developments():
    print("[TEST 2] Developments of helical and Darboux motions...")
    helix = develop(CylinderMotion.helical(0.5), (0.0, 2 * math.pi), 25)
    assert all(math.isclose(s.slope, 0.5) and abs(s.curvature) < 1e-12 for s in helix.samples)
    assert np.allclose(helix.z, 0.5 * helix.u)

    c = 1.5
    wave = develop(CylinderMotion.darboux(c), (-1.0, 4.0), 11)
    assert np.allclose(wave.z, c * np.sin(wave.u))
    assert np.allclose([s.slope for s in wave.samples], c * np.cos(wave.u))
    assert len(wave.csv_rows()) == 11 and len(wave.csv_rows()[0]) == 4
    print("[PASS] straight line and sine curve")


def test_stationary_angle():
    print("[TEST 3] Stationary angle...")
    motion = CylinderMotion(ScalarFunction((0.0, 0.0, 1.0)), ScalarFunction.linear(1.0))
    try:
        develop(motion, (-1.0, 1.0), 3)
    except StationaryAngle:
        print("[PASS] StationaryAngle raised at t = 0")
    else:
        raise AssertionError("dω/dt = 0 accepted")


def test_scalar_function_jet():
    print("[TEST 4] Jets of scalar functions...")
    wave = ScalarFunction.sinusoid(2.0, 3.0)
    assert np.allclose(wave.jet(0.0), [0.0, 6.0, 0.0, -54.0])
    mixed = ScalarFunction((1.0, 0.0, 1.0)) + ScalarFunction.linear(2.0)
    assert np.allclose(mixed.jet(1.0), [4.0, 4.0, 2.0, 0.0])
    print("[PASS] polynomial and sinusoid derivatives")


def test_osculating_parabola():
    print("[TEST 5] Osculating Darboux motion of ω = t, z = t²...")
    motion = CylinderMotion(ScalarFunction.linear(1.0), ScalarFunction((0.0, 0.0, 1.0)))
    result = osculating_darboux(motion, 0.0)
    assert math.isclose(result.amplitude, 2.0)
    assert math.isclose(result.fit.phi, 3 * math.pi / 2)
    assert contact_order(motion.curve(), result.aligned, 0.0, 0.0, 2) == 2

    generic = osculating_darboux(motion, 0.5)
    assert math.isclose(generic.amplitude, math.sqrt(5.0))
    assert contact_order(motion.curve(), generic.aligned, 0.5, 0.5, 3) == 2
    assert math.isclose(float(generic.developed_height(0.5)), 0.25, abs_tol=1e-12)
    print("[PASS] second order contact, exactly 2 at a generic parameter")


def test_osculating_darboux_is_itself():
    print("[TEST 6] A Darboux motion osculates itself...")
    c = 1.5
    motion = CylinderMotion.darboux(c)
    result = osculating_darboux(motion, 0.7)
    assert math.isclose(result.amplitude, c)
    assert abs(result.shift) < 1e-12 and abs(result.height_offset) < 1e-12
    for u in (-1.0, 0.3, 2.2):
        assert result.pose(u).isclose(motion(u), 1e-12)
    assert contact_order(motion.curve(), result.aligned, 0.7, 0.7, 3) == 3
    print("[PASS] same amplitude, no shift")


def test_development_svg():
    print("[TEST 7] SVG output...")
    motion = CylinderMotion.darboux(1.0)
    curve = develop(motion, (0.0, 2 * math.pi), 50)
    first = development_svg(curve, osculating_darboux(motion, 1.0), motion.label)
    second = development_svg(curve, osculating_darboux(motion, 1.0), motion.label)
    assert first.lstrip().startswith('<?xml') and '<svg' in first
    assert first == second, "identical inputs must give identical SVG"
    print("[PASS] deterministic SVG document")


def test_sine_fit_roundtrips():
    print("[TEST 8] Sine fit on random slopes and curvatures...")
    rng = np.random.default_rng(3307)
    for k, kappa in rng.uniform(-4.0, 4.0, size=(1000, 2)):
        fit = sine_fit(k, kappa)
        assert fit.a >= 0.0 and 0.0 <= fit.phi < 2 * math.pi
        assert math.isclose(fit.slope(), k, rel_tol=1e-9, abs_tol=1e-9)
        assert math.isclose(fit.curvature(), kappa, rel_tol=1e-9, abs_tol=1e-9)
    for p, t0 in zip(rng.uniform(0.05, 5.0, 50), rng.uniform(-3.0, 3.0, 50)):
        result = osculating_darboux(CylinderMotion.helical(p), t0)
        assert math.isclose(result.amplitude, p, rel_tol=1e-12), "a helix osculates with amplitude = pitch"
    print("[PASS] slope and curvature reproduced, helical pitch recovered")


if __name__ == '__main__':
    test_sine_fit()
    test_developments()
    test_stationary_angle()
    test_scalar_function_jet()
    test_osculating_parabola()
    test_osculating_darboux_is_itself()
    test_development_svg()
    test_sine_fit_roundtrips()
    print("[SUCCESS] All tests passed!")
    sys.exit(0)
