#!/usr/bin/env python3
"""
Tests for the factorization of quadratic null cone motions in the three
cases of the primal part, and of Bennett motions.
"""

import math
import sys

import numpy as np

from core.dualnum import DualNumber
from core.dualquat import DualQuaternion, Quaternion
from core.errors import (
    InvalidParams,
    NoFactorization,
    NotCaseB,
    NotCaseC,
    NotNullCone,
    QuadrupleRoot,
)
from core.factor import (
    NullConeCase,
    choose_revolute_representative,
    circular_rotation_pair,
    classify_case,
    factor_bounded_translation,
    factor_generic_quadratic,
    factor_hyperbolic_translation,
    factor_motion,
    reduce_to_study,
    translation_semi_axes,
)
from core.linkage import extract_joint
from core.motionpoly import MotionPoly, mp_norm

R3 = math.sqrt(3.0)


def dq(primal, dual=(0.0, 0.0, 0.0, 0.0)):
    return DualQuaternion(Quaternion(*primal), Quaternion(*dual))


def poly(*rows):
    return MotionPoly.from_array(np.array(rows, dtype=float))


# t² + 1 + ε(√3t + 𝐣t + 2𝐢)
EXAMPLE = poly(
    [1.0, 0, 0, 0, 0, 2.0, 0, 0],
    [0, 0, 0, 0, R3, 0, 1.0, 0],
    [1.0, 0, 0, 0, 0, 0, 0, 0],
)
F1 = MotionPoly.linear(dq((0, -R3 / 2, 0, 0.5), (0, 1 / 3, -1.0, R3 / 3)))
F2 = MotionPoly.linear(dq((0, R3 / 2, 0, -0.5), (-R3, -1 / 3, 0, -R3 / 3)))
G1 = MotionPoly.linear(dq((0, R3 / 2, 0, 0.5), (-R3, -1 / 3, -1.0, R3 / 3)))
G2 = MotionPoly.linear(dq((0, -R3 / 2, 0, -0.5), (0, 1 / 3, 0, -R3 / 3)))

H1 = dq((0.5, 1.0, 0.0, 0.0), (0.3, 0.2, -0.1, 0.4))
H2 = dq((0.5, 0.0, 0.6, 0.8), (-0.2, 0.5, 0.1, 0.3))
CASE_A = MotionPoly.linear(H1) * MotionPoly.linear(H2)

# bounded translation with V0 not orthogonal to V1
SKEWED = poly(
    [1.0, 0, 0, 0, 0.4, 2.0, 0, 0],
    [0, 0, 0, 0, -0.3, 0.5, 1.0, 0],
    [1.0, 0, 0, 0, 0, 0, 0, 0],
)

# (t − 1)(t + 2) + ε(dual linear part)
CASE_C = poly(
    [-2.0, 0, 0, 0, 0.7, 0.3, -0.4, 0.2],
    [1.0, 0, 0, 0, 0.5, -0.1, 0.6, 0.25],
    [1.0, 0, 0, 0, 0, 0, 0, 0],
)


def test_classification():
    print("[TEST 1] Case classification...")
    assert classify_case(EXAMPLE).case is NullConeCase.B_IRREDUCIBLE_QUADRATIC
    assert classify_case(CASE_A).case is NullConeCase.A_NO_REAL_FACTOR
    report = classify_case(CASE_C)
    assert report.case is NullConeCase.C_TWO_REAL_LINEAR
    assert np.allclose(sorted(r.real for r in report.roots), [-2.0, 1.0])

    for c, error in (
        (poly([1.0, 0, 0, 0, 0, 0, 0, 0], [0, 1.0, 0, 0, 0, 0, 0, 0], [1.0, 0, 0, 0, 0, 0, 0, 0]), NotNullCone),
        (poly([0.0] * 8, [0.0] * 8, [1.0, 0, 0, 0, 0, 0, 0, 0]), QuadrupleRoot),
        (MotionPoly.linear(H1), InvalidParams),
    ):
        try:
            classify_case(c)
        except error:
            continue
        raise AssertionError(f"{error.__name__} expected")
    print("[PASS] cases A, B and C and rejected inputs")


def test_case_a():
    print("[TEST 2] Case A: no real factor...")
    result = factor_motion(CASE_A)
    assert result.case is NullConeCase.A_NO_REAL_FACTOR
    assert result.verify(CASE_A) < 1e-9
    right_norm = mp_norm(result.factors[1])
    assert right_norm.is_real(1e-9) and np.allclose(right_norm.primal, [1.25, -1.0, 1.0])
    assert result.product().isclose(CASE_A, 1e-8)

    broken = CASE_A + MotionPoly.constant(dq((0, 0, 0, 0), (0.5, 0, 0, 0)))
    assert classify_case(broken).case is NullConeCase.A_NO_REAL_FACTOR
    try:
        factor_motion(broken)
    except NoFactorization as exc:
        assert 'Study quadric' in str(exc)
        print("[PASS] factors recovered, off-Study input rejected")
    else:
        raise AssertionError("c off the Study quadric at the roots of s has no factorization")


def test_bounded_translation_example():
    print("[TEST 3] Case B: the bounded translation example...")
    first = factor_bounded_translation(EXAMPLE, 0.0, 1 / R3, '+')
    second = factor_bounded_translation(EXAMPLE, 0.0, 1 / R3, '-')
    assert first.factors[0].isclose(F1, 1e-12) and first.factors[1].isclose(F2, 1e-12)
    assert second.factors[0].isclose(G1, 1e-12) and second.factors[1].isclose(G2, 1e-12)
    assert (F1 * F2).isclose(EXAMPLE, 1e-12) and (G1 * G2).isclose(EXAMPLE, 1e-12)
    assert first.family_params == {'v2': 0.0, 'v3': 1 / R3}
    assert first.branch == '+' and second.branch == '-'

    for v2, v3 in ((0.0, 0.0), (1.2, -0.4), (-3.0, 2.5)):
        for branch in ('+', '-'):
            result = factor_bounded_translation(EXAMPLE, v2, v3, branch)
            assert result.product().isclose(EXAMPLE, 1e-9), (v2, v3, branch)
    print("[PASS] F1, F2, G1, G2 reproduced; whole families factor c")


def test_semi_axes_and_representative():
    print("[TEST 4] Semi-axes and revolute representative...")
    axes = translation_semi_axes(EXAMPLE)
    assert math.isclose(axes.a, 2.0) and math.isclose(axes.b, 1.0) and not axes.circular

    representative = choose_revolute_representative(EXAMPLE, '+')
    assert representative.isclose(EXAMPLE, 1e-12), "the example already has a revolute F1"
    for branch, other in (('+', '-'), ('-', '+')):
        c = choose_revolute_representative(SKEWED, branch)
        first = factor_bounded_translation(c, 0.2, -0.1, branch).factors[0]
        second = factor_bounded_translation(c, 0.2, -0.1, other).factors[1]
        assert mp_norm(first).is_real(1e-9), f"branch {branch}: left factor is not revolute"
        assert mp_norm(second).is_real(1e-9), f"branch {other}: right factor is not revolute"
    print("[PASS] a = 2, b = 1 and revolute factors after rescaling")


def test_circular_translation():
    print("[TEST 5] Circular translation...")
    c = poly(
        [1.0, 0, 0, 0, 0, 1.0, 0, 0],
        [0, 0, 0, 0, 0, 0, 1.0, 0],
        [1.0, 0, 0, 0, 0, 0, 0, 0],
    )
    report = circular_rotation_pair(c)
    assert report.circular
    assert report.factorization.product().isclose(c, 1e-9)
    for v1, v2 in ((0.0, 0.0), (0.5, -1.0)):
        assert factor_bounded_translation(c, v1, v2).product().isclose(c, 1e-9)
    try:
        factor_bounded_translation(CASE_A)
    except NotCaseB:
        print("[PASS] circular family factors c, case A rejected")
    else:
        raise AssertionError("case A is not a bounded translation")


def test_hyperbolic_translation():
    print("[TEST 6] Case C: hyperbolic translation...")
    reduced = reduce_to_study(CASE_C, [-1.0, 1.0], [2.0, 1.0])
    assert mp_norm(reduced).is_real(1e-9)

    result = factor_hyperbolic_translation(CASE_C)
    assert result.case is NullConeCase.C_TWO_REAL_LINEAR
    assert result.kinematically_identical
    assert np.allclose(sorted(p.root for p in result.prefactors), [-2.0, 1.0])
    assert np.allclose(sorted(p.lam for p in result.prefactors), [0.1, 0.4])
    assert result.verify(CASE_C) < 1e-9
    norms = mp_norm(result.factors[0]) * mp_norm(result.factors[1])
    assert norms.isclose(mp_norm(reduced), 1e-8)
    assert factor_motion(CASE_C).verify(CASE_C) < 1e-9

    try:
        factor_hyperbolic_translation(EXAMPLE)
    except NotCaseC:
        print("[PASS] prefactors and factors reproduce c")
    else:
        raise AssertionError("case B is not a hyperbolic translation")


def test_bennett_factorizations():
    print("[TEST 7] Two factorizations of a Bennett motion...")
    right = MotionPoly.linear(dq((0, 2.0, 0, 0), (0, 0, 0, 2.0)))
    left = MotionPoly.linear(dq((0, 0, 0, 1.0)))
    c = left * right
    first = factor_generic_quadratic(c, [4.0, 0.0, 1.0])
    second = factor_generic_quadratic(c, [1.0, 0.0, 1.0])
    assert first.factors[1].isclose(right, 1e-9)
    assert first.verify(c) < 1e-9 and second.verify(c) < 1e-9
    assert np.allclose(mp_norm(second.factors[1]).primal, [1.0, 0.0, 1.0])
    assert not second.factors[1].isclose(right, 1e-3)
    print("[PASS] both factorizations found")

def test_family_frame_is_principal():
    print("[TEST 8] Family parameters in the principal frame of the ellipse...")
    v0, v1 = np.array([2.0, 0.0, 0.0]), np.array([0.5, 1.0, 0.0])
    matrix = np.column_stack([v0, v1])
    major = np.linalg.eigh(matrix @ matrix.T)[1][:, -1]
    axes = translation_semi_axes(SKEWED)
    assert math.isclose(abs(axes.directions[0] @ major), 1.0, rel_tol=1e-12)
    assert axes.directions[0] @ v0 > 0 and np.allclose(axes.directions[2], [0.0, 0.0, 1.0])
    for branch in ('+', '-'):
        result = factor_bounded_translation(SKEWED, 0.2, -0.1, branch)
        vector = result.factors[1].as_array()[0, 5:]
        assert math.isclose(vector @ axes.directions[1], 0.2, abs_tol=1e-12)
        assert math.isclose(vector @ axes.directions[2], -0.1, abs_tol=1e-12)
        assert result.family_params == {'v2': 0.2, 'v3': -0.1}
    print("[PASS] v2 and v3 are coordinates along the minor axis and the normal")


def _case_a_motion(rng):
    w = rng.uniform(-1.0, 1.0)
    radius = rng.uniform(0.5, 1.5)
    first, second = (radius * d / np.linalg.norm(d) for d in rng.normal(size=(2, 3)))
    if first @ second < 0:
        second = -second
    h1 = dq((w, *first), tuple(rng.normal(size=4)))
    h2 = dq((w, *second), tuple(rng.normal(size=4)))
    return MotionPoly.linear(h1) * MotionPoly.linear(h2)


def test_case_a_random():
    print("[TEST 9] Case A on random motions...")
    rng = np.random.default_rng(4409)
    for _ in range(25):
        c = _case_a_motion(rng)
        result = factor_motion(c)
        assert result.case is NullConeCase.A_NO_REAL_FACTOR
        assert result.verify(c) < 1e-8 and result.product().isclose(c, 1e-7)
    for _ in range(25):
        c = _case_a_motion(rng)
        delta = rng.choice([-1.0, 1.0]) * rng.uniform(0.3, 1.0)
        broken = c + MotionPoly.constant(dq((0, 0, 0, 0), (delta, 0, 0, 0)))
        assert classify_case(broken).case is NullConeCase.A_NO_REAL_FACTOR
        try:
            factor_motion(broken)
        except NoFactorization as exc:
            assert 'Study quadric' in str(exc)
            continue
        raise AssertionError("a motion off the Study quadric at the roots of s was factored")
    print("[PASS] 25 motions factored, 25 broken ones rejected")


def test_case_c_representatives():
    print("[TEST 10] Case C: other representatives share the joint axes...")
    rng = np.random.default_rng(5501)
    reference = [extract_joint(f).direction for f in factor_hyperbolic_translation(CASE_C).factors]
    for _ in range(20):
        # adding ε(a + bt) to the scalar part is a dual multiple away from the roots
        a, b = rng.uniform(-2.0, 2.0, size=2)
        shifted = CASE_C + poly([0, 0, 0, 0, a, 0, 0, 0], [0, 0, 0, 0, b, 0, 0, 0])
        mu = DualNumber(rng.choice([-1.0, 1.0]) * rng.uniform(0.3, 3.0), rng.normal())
        c = mu * shifted
        result = factor_hyperbolic_translation(c)
        assert result.verify(c) < 1e-8
        for factor, expected in zip(result.factors, reference):
            direction = extract_joint(factor).direction
            assert np.linalg.norm(np.cross(direction, expected)) < 1e-8, "axes moved"
    print("[PASS] same translation directions for every representative")


def test_bounded_translation_random():
    print("[TEST 11] Case B on random motions and family parameters...")
    rng = np.random.default_rng(6607)
    for _ in range(20):
        m, w = rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0)
        d0, d1 = rng.normal(size=(2, 4))
        c = poly(
            [m * m + w * w, 0, 0, 0, *d0],
            [-2 * m, 0, 0, 0, *d1],
            [1.0, 0, 0, 0, 0, 0, 0, 0],
        )
        for v2, v3 in rng.uniform(-3.0, 3.0, size=(5, 2)):
            for branch in ('+', '-'):
                result = factor_bounded_translation(c, v2, v3, branch)
                assert result.verify(c) < 1e-9, (v2, v3, branch)
                assert result.product().isclose(c, 1e-8)
    print("[PASS] every member of both families reproduces c")


if __name__ == '__main__':
    test_classification()
    test_case_a()
    test_bounded_translation_example()
    test_semi_axes_and_representative()
    test_circular_translation()
    test_hyperbolic_translation()
    test_bennett_factorizations()
    test_family_frame_is_principal()
    test_case_a_random()
    test_case_c_representatives()
    test_bounded_translation_random()
    print("[SUCCESS] All tests passed!")
    sys.exit(0)
