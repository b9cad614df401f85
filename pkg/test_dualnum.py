#!/usr/bin/env python3
"""
Tests for dual number arithmetic and the command-line dual literal.
"""

import sys

import numpy as np

from core.dualnum import EPSILON, ONE, DualNumber, dual_arith, dual_inv, parse_dual
from core.errors import InvalidParams, NotInvertible


def test_arithmetic():
    print("[TEST 1] Dual number arithmetic...")
    x, y = DualNumber(2.0, 3.0), DualNumber(-1.0, 0.5)
    assert dual_arith(x, y, 'add') == DualNumber(1.0, 3.5)
    assert dual_arith(x, y, 'sub') == DualNumber(3.0, 2.5)
    assert dual_arith(x, y, 'mul') == DualNumber(-2.0, 1.0 - 3.0)
    assert EPSILON * EPSILON == DualNumber(0.0, 0.0), "ε² must vanish"
    assert 2 * ONE + EPSILON == DualNumber(2.0, 1.0)
    print("[PASS] sums, differences and products")


def test_inverse():
    print("[TEST 2] Inversion...")
    x = DualNumber(2.0, 3.0)
    inv = dual_inv(x)
    assert inv.isclose(DualNumber(0.5, -0.75), 1e-15)
    assert (x * inv).isclose(ONE, 1e-15)
    assert (ONE / x).isclose(inv, 1e-15)
    try:
        DualNumber(0.0, 1.0).inverse()
    except NotInvertible:
        print("[PASS] ε is not invertible")
    else:
        raise AssertionError("inverting ε should fail")


def test_parse_dual():
    print("[TEST 3] Parsing dual literals...")
    assert parse_dual('1.5,-2') == DualNumber(1.5, -2.0)
    assert parse_dual(' 3 ') == DualNumber(3.0, 0.0)
    for bad in ('a,b', '1,2,3', '', '1,'):
        try:
            parse_dual(bad)
        except InvalidParams:
            continue
        raise AssertionError(f"{bad!r} should be rejected")
    print("[PASS] literals parsed and malformed ones rejected")


def test_ring_axioms():
    print("[TEST 4] Ring axioms on random dual numbers...")
    rng = np.random.default_rng(1101)
    for x, y, z in rng.uniform(-5.0, 5.0, size=(1000, 3, 2)):
        x, y, z = DualNumber(*x), DualNumber(*y), DualNumber(*z)
        assert ((x + y) + z).isclose(x + (y + z), 1e-12)
        assert ((x * y) * z).isclose(x * (y * z), 1e-10)
        assert (x * (y + z)).isclose(x * y + x * z, 1e-10)
        assert (x * y) == (y * x), "dual numbers commute"
        assert (x - x).isclose(DualNumber(0.0), 0.0) and (x * ONE) == x
        if abs(x.primal) > 1e-3:
            assert (x * dual_inv(x)).isclose(ONE, 1e-9)
    print("[PASS] associativity, distributivity, commutativity and inverses")


if __name__ == '__main__':
    test_arithmetic()
    test_inverse()
    test_parse_dual()
    test_ring_axioms()
    print("[SUCCESS] All tests passed!")
    sys.exit(0)
