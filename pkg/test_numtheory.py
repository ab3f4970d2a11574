"""
Tests for exact integer arithmetic: factorization, orders, primitive roots
and the full-divisor sets used by the classifier.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

from app.algebra.numtheory import (
    carmichael,
    divisors,
    euler_phi,
    factor,
    first_primitive_root,
    full_divisors,
    is_full_divisor,
    is_prime_power,
    mult_order,
    primitive_roots,
    t0_set,
    valuation,
)
from app.errors import CapacityError, DomainError


def test_factor_small():
    f = factor(360)
    assert f.pairs == ((2, 3), (3, 2), (5, 1))
    assert f.value() == 360
    assert f.exponent(3) == 2
    assert f.exponent(7) == 0


def test_factor_large_semiprime():
    """Two primes above the trial-division bound are split by Pollard rho."""
    p, q = 2**31 - 1, 4294967291
    assert factor(p * q).pairs == ((p, 1), (q, 1))


def test_factor_limits():
    with pytest.raises(CapacityError):
        factor(2**65)
    assert factor(2**65, limit=2**70).pairs == ((2, 65),)
    with pytest.raises(DomainError):
        factor(0)


def test_divisors_and_valuation():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert valuation(48, 2) == 4
    assert valuation(48, 5) == 0
    with pytest.raises(DomainError):
        valuation(0, 2)


def test_totients_and_orders():
    assert euler_phi(36) == 12
    assert euler_phi(1) == 1
    assert carmichael(8) == 2
    assert carmichael(15) == 4
    assert mult_order(2, 7) == 3
    assert mult_order(3, 7) == 6
    assert mult_order(5, 1) == 1
    with pytest.raises(DomainError):
        mult_order(2, 4)


def test_primitive_roots():
    assert primitive_roots(7) == [3, 5]
    assert primitive_roots(3, 2) == [2, 5]
    assert primitive_roots(2) == [1]
    assert primitive_roots(2, 2) == [3]
    assert first_primitive_root(3, 2) == 2
    assert first_primitive_root(11) == 2
    assert len(primitive_roots(3, 3)) == euler_phi(euler_phi(27))
    with pytest.raises(DomainError):
        primitive_roots(2, 3)


def test_prime_powers():
    assert is_prime_power(27) == (3, 3)
    assert is_prime_power(2) == (2, 1)
    assert is_prime_power(12) is None
    assert is_prime_power(1) is None


def test_full_divisor_sets():
    assert list(full_divisors(12)) == [1, 3, 4, 12]
    assert is_full_divisor(4, 12)
    assert not is_full_divisor(2, 12)
    assert list(t0_set(12)) == [1, 3]
    assert list(t0_set(21)) == [1, 3, 7]
    assert 7 in t0_set(21)
    assert list(t0_set(1)) == [1]
