"""
Tests for the interval certification of the gap constants, the gap scan
and the limit sequences.
"""

import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

from app.algebra.bounds import (
    GapViolation,
    RationalInterval,
    anlem_certify,
    decimal_digits,
    gap_scan,
    limit_sequence,
    rho0,
    rho0_sequence,
    rho1,
    tail_bounds,
)
from app.algebra.fdg import Mult
from app.errors import CapacityError, DomainError


def test_rational_interval():
    I = RationalInterval(Fraction(1, 3), Fraction(1, 2))
    assert Fraction(2, 5) in I
    assert Fraction(3, 5) not in I
    assert I.width == Fraction(1, 6)
    assert (I * 2).hi == 1
    assert I.strictly_below(RationalInterval.point(Fraction(2, 3)))
    with pytest.raises(DomainError):
        RationalInterval(Fraction(1, 2), Fraction(1, 3))


def test_decimal_digits_truncate():
    assert decimal_digits(RationalInterval.point(Fraction(1, 4)), 2) == "0.25"
    assert decimal_digits(RationalInterval.point(Fraction(2, 3)), 3) == "0.666"
    assert decimal_digits(RationalInterval(Fraction(1, 3), Fraction(1, 2)), 1) is None
    assert decimal_digits(RationalInterval.point(Fraction(1, 4)), 0) == "0"


def test_tail_bounds():
    t = tail_bounds(41)
    assert t.hi == 1
    assert 1 - t.lo < Fraction(1, 2**38)
    with pytest.raises(DomainError):
        tail_bounds(0)


def test_rho0_digits():
    r = rho0()
    assert r.width < Fraction(1, 10**11)
    assert decimal_digits(r, 9) == "0.504307524"
    assert decimal_digits(r, 11) == "0.50430752479"


def test_rho1_digits():
    r = rho1()
    assert decimal_digits(r, 9) == "0.750063685"
    assert decimal_digits(r, 11) == "0.75006368516"
    assert r.lo > Fraction(3, 4)


def test_anlem_bounds_all_hold():
    verdicts = anlem_certify()
    assert [v.bound_id for v in verdicts] == list(range(1, 9))
    assert all(v.verified for v in verdicts)


def test_gaps_are_empty():
    assert gap_scan(Fraction(1, 2), rho0().hi, 2**60) == []
    assert gap_scan(Fraction(3, 4), rho1().hi, 2**60) == []


def test_gap_scan_finds_values_outside_gaps():
    found = gap_scan(Fraction(1, 2), Fraction(3, 5), 1000)
    assert GapViolation("V(P2@2) * odd part of order 5", Fraction(3, 5)) in found
    assert all(Fraction(1, 2) < v.lam <= Fraction(3, 5) for v in found)
    assert gap_scan(Fraction(3, 4), Fraction(1, 2), 1000) == []
    with pytest.raises(CapacityError):
        gap_scan(Fraction(1, 2), Fraction(3, 5), 10**9, range_capacity=0)


def test_limit_sequence_increases_to_base():
    terms = limit_sequence(Mult(3, 2), 3)
    assert [t.degree for t in terms] == [3, 5, 7]
    assert terms[0].witness == "M(3,2) * V(x^3+x+1@2)"
    lams = [t.lam for t in terms]
    assert lams == sorted(lams)
    assert all(lam < Fraction(2, 3) for lam in lams)
    assert lams[0] == Fraction(2, 3) * Fraction(7, 8)


def test_rho0_sequence_decreases_to_rho0():
    terms = rho0_sequence(4)
    assert [t.lam for t in terms[:3]] == [Fraction(3, 5), Fraction(21, 40), Fraction(651, 1280)]
    lams = [t.lam for t in terms]
    assert lams == sorted(lams, reverse=True)
    assert rho0().hi < lams[-1]
    assert terms[1].witness == "M(5,2) * V(x^2+x+1@2) * V(x^3+x+1@2)"
