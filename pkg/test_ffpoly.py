"""
Tests for polynomials over prime fields: parsing, irreducibility, orders,
primitivity, factorization and companion matrices.
"""

import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest
from sympy import Matrix, symbols

from app.algebra.ffpoly import (
    FpPoly,
    companion,
    count_primitive,
    enum_irreducible,
    enum_primitive,
    factor_poly,
    first_primitive,
    is_irreducible,
    is_primitive,
    parse_poly,
    poly_order,
)
from app.algebra.linalg import charpoly_mod_p, random_invertible
from app.errors import CapacityError, DomainError


def test_parse_and_label():
    P = parse_poly("x^4+x+1@2")
    assert P.coeffs == (1, 1, 0, 0, 1)
    assert P.label() == "x^4+x+1@2"
    assert parse_poly("x^4 + x + 1 mod 2") == P
    assert parse_poly("(x-2)^2@3") == parse_poly("x^2+2x+1@3")
    assert parse_poly("1+x", 5).label() == "x+1@5"


@pytest.mark.parametrize("text", ["x^2+x+1", "x^+1@2", "x^2+y@2", "x^2+1@4"])
def test_parse_rejects(text):
    with pytest.raises(DomainError):
        parse_poly(text)


@pytest.mark.parametrize("p", [0, 1, 4, 9])
def test_composite_modulus_rejected(p):
    with pytest.raises(DomainError):
        FpPoly(p, (1, 1, 1))


def test_irreducibility_and_order():
    assert is_irreducible(parse_poly("x^4+x+1@2"))
    assert not is_irreducible(parse_poly("x^4+x^2+1@2"))
    assert poly_order(parse_poly("x^4+x^3+x^2+x+1@2")) == 5
    assert poly_order(parse_poly("x^4+x+1@2")) == 15
    # (x^2+x+1)^2: order 3, doubled by the repeated factor
    assert poly_order(parse_poly("x^4+x^2+1@2")) == 6
    with pytest.raises(DomainError):
        poly_order(parse_poly("x^3+x@2"))


def test_primitivity():
    assert is_primitive(parse_poly("x^4+x+1@2"))
    assert not is_primitive(parse_poly("x^4+x^3+x^2+x+1@2"))
    assert is_primitive(parse_poly("x^2+x+2@3"))
    assert not is_primitive(parse_poly("x^2+1@3"))
    with pytest.raises(DomainError):
        is_primitive(parse_poly("x^4+x^2+1@2"))


def test_factorization():
    assert factor_poly(parse_poly("x^4+x^2+1@2")) == [(parse_poly("x^2+x+1@2"), 2)]
    assert factor_poly(parse_poly("x^5+1@2")) == [
        (parse_poly("x+1@2"), 1),
        (parse_poly("x^4+x^3+x^2+x+1@2"), 1),
    ]
    f = parse_poly("(x+1)^3*(x^2+1)*(x^3+x+1)@3")
    rebuilt = FpPoly.const(3, 1)
    for Q, k in factor_poly(f):
        assert is_irreducible(Q)
        rebuilt = rebuilt * Q**k
    assert rebuilt == f.monic()


def test_enumeration():
    assert count_primitive(2, 4) == 2
    assert [P.label() for P in enum_primitive(2, 4)] == ["x^4+x+1@2", "x^4+x^3+1@2"]
    assert [P.label() for P in enum_primitive(3, 2)] == ["x^2+x+2@3", "x^2+2x+2@3"]
    assert len(enum_primitive(2, 8)) == count_primitive(2, 8) == 16
    assert [P.label() for P in enum_irreducible(3, 2)] == ["x^2+1@3", "x^2+x+2@3", "x^2+2x+2@3"]
    assert first_primitive(2, 5).label() == "x^5+x^2+1@2"
    with pytest.raises(CapacityError):
        enum_primitive(2, 30, capacity=2**20)


def test_companion_matrix():
    C = companion(parse_poly("x^3+x+1@2"))
    assert C.rows == ((0, 0, 1), (1, 0, 1), (0, 1, 0))
    assert charpoly_mod_p(C.rows, 2) == parse_poly("x^3+x+1@2")
    with pytest.raises(DomainError):
        companion(parse_poly("2x^2+1@3"))


@pytest.mark.parametrize("p,n", [(2, 4), (3, 3), (5, 3), (7, 2)])
def test_charpoly_matches_sympy(p, n):
    rng = random.Random(1000 * p + n)
    x = symbols("x")
    for _ in range(5):
        A = random_invertible(n, p, rng)
        expected = [int(c) % p for c in Matrix([list(row) for row in A]).charpoly(x).all_coeffs()]
        assert charpoly_mod_p(A, p) == FpPoly(p, tuple(reversed(expected)))
