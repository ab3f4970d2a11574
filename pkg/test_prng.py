"""
Tests for the congruential and vector generators and their period
certificates.
"""

import random
import sys
from math import gcd
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

from app.algebra.ffpoly import enum_primitive
from app.algebra.prng import (
    RngStream,
    certified_period,
    certify_full_period,
    lcg,
    measured_period,
    stream,
    vecgen,
)
from app.errors import DomainError, NonPeriodicError


def test_lcg_stream():
    spec = lcg(16, 5, 3, 0)
    assert spec.render() == "lcg(m=16, a=5, c=3, seed=0)"
    assert (spec.states, spec.state_count) == ("Z16", 16)
    assert stream(spec, 4) == [0, 3, 2, 13]
    assert certify_full_period(spec)
    assert certified_period(spec) == measured_period(spec) == 16


def test_lcg_short_period():
    spec = lcg(16, 3, 3, 0)
    assert not certify_full_period(spec)
    assert certified_period(spec) is None
    assert measured_period(spec) == 8


def test_lcg_rejects_non_bijection():
    with pytest.raises(NonPeriodicError):
        lcg(10, 2, 1)
    with pytest.raises(DomainError):
        lcg(0, 1, 1)


def test_lcg_full_period_matches_traversal():
    for m in range(1, 33):
        for a in range(m):
            if gcd(a, m) != 1:
                continue
            for c in range(m):
                spec = lcg(m, a, c)
                assert certify_full_period(spec) == (measured_period(spec, m) == m), spec.render()


@pytest.mark.parametrize("m", [8, 9, 16, 81])
def test_lcg_full_period_grid(m):
    full = [(a, c) for a in range(m) for c in range(m) if gcd(a, m) == 1 and certify_full_period(lcg(m, a, c))]
    measured = [
        (a, c) for a in range(m) for c in range(m) if gcd(a, m) == 1 and measured_period(lcg(m, a, c), m) == m
    ]
    assert full == measured
    assert full


def test_vector_generator_primitive():
    spec = vecgen(2, "x^4+x+1", 1)
    assert (spec.states, spec.state_count) == ("Z2^4", 16)
    assert stream(spec, 5) == [1, 2, 4, 8, 3]
    assert certify_full_period(spec)
    assert certified_period(spec) == measured_period(spec) == 15
    assert vecgen(2, "x^4+x+1", (1, 0, 0, 0)) == spec


def test_vector_generator_primitive_periods_seeded():
    rng = random.Random(7)
    for _ in range(50):
        p, d = rng.choice([(2, 3), (2, 5), (2, 8), (3, 3), (3, 5), (5, 3), (7, 2), (11, 2)])
        P = rng.choice(enum_primitive(p, d))
        spec = vecgen(p, P, rng.randrange(1, p**d))
        assert certify_full_period(spec)
        assert certified_period(spec) == measured_period(spec) == p**d - 1


def test_vector_generator_irreducible_not_primitive():
    spec = vecgen(2, "x^4+x^3+x^2+x+1", 1)
    assert not certify_full_period(spec)
    assert certified_period(spec) == measured_period(spec) == 5


def test_vector_generator_zero_seed():
    spec = vecgen(2, "x^4+x+1", 0)
    assert not certify_full_period(spec)
    assert certified_period(spec) == measured_period(spec) == 1
    assert stream(spec, 3) == [0, 0, 0]


def test_vector_generator_rejects():
    with pytest.raises(DomainError):
        vecgen(2, "x^3+x", 1)
    with pytest.raises(DomainError):
        vecgen(2, "x^2+x+1", 4)
    with pytest.raises(DomainError):
        vecgen(3, "x^2+x+1@2", 1)


def test_measured_period_cap():
    spec = lcg(2**20, 5, 1)
    assert measured_period(spec, cap=100) is None
    with pytest.raises(DomainError):
        measured_period(spec, cap=0)


def test_stream_cursor():
    it = RngStream(lcg(16, 5, 3, 0))
    assert [next(it), next(it)] == [0, 3]
    assert it.take(2) == [2, 13]
    assert it.emitted == 4
    with pytest.raises(DomainError):
        stream(lcg(16, 5, 3), -1)
