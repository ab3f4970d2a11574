"""
Seeded property checks for the structural identities: products, transfer
through a quotient, affine orders and inversion shares.
"""

import random
import sys
from fractions import Fraction
from math import gcd
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

from app.algebra.abelian import AbelianPGroup, enum_autos, inversion_fraction, inversion_lemma_check
from app.algebra.classify import classify_rho, expand
from app.algebra.fdg import (
    Dicyclic,
    Dihedral,
    Mult,
    affine_order_check,
    enum_group_automorphisms,
    evaluate,
    lambda_product,
    mult_structure,
    transfer_check,
)

CASES = 200


def _unit(rng, m):
    while True:
        a = rng.randrange(1, m)
        if gcd(a, m) == 1:
            return a


def test_product_is_multiplicative_exactly_when_coprime():
    rng = random.Random(1)
    for _ in range(CASES):
        m1, m2 = rng.randrange(2, 80), rng.randrange(2, 80)
        s1, s2 = mult_structure(m1, _unit(rng, m1)), mult_structure(m2, _unit(rng, m2))
        joined = s1.join(s2)
        coprime = gcd(s1.Lambda, s2.Lambda) == 1
        assert (joined.Lambda == s1.Lambda * s2.Lambda) == coprime
        out = lambda_product([s1, s2])
        assert out.coprime == coprime
        assert out.value == joined.lam
        if not coprime:
            assert out.value <= out.bound


def test_transfer_through_cyclic_quotients():
    rng = random.Random(2)
    for _ in range(CASES):
        m = rng.randrange(2, 200)
        d = rng.choice([k for k in range(1, m + 1) if m % k == 0])
        N = [(k,) for k in range(0, m, d)]
        check = transfer_check(Mult(m, _unit(rng, m)).to_map(), N)
        assert check.verified
        assert Fraction(check.Lambda, m) == Fraction(check.L, check.quotient_order) * Fraction(check.l, len(N))


@pytest.fixture(scope="module")
def small_p_groups():
    groups = [
        AbelianPGroup(2, (1, 2)),
        AbelianPGroup(2, (1, 1, 2)),
        AbelianPGroup(3, (1, 1)),
        AbelianPGroup(3, (2,)),
        AbelianPGroup(5, (2,)),
        AbelianPGroup(2, (3,)),
    ]
    return [(G, list(enum_autos(G))) for G in groups]


def test_affine_order_is_translation_order_times_automorphism_order(small_p_groups):
    rng = random.Random(3)
    for _ in range(CASES):
        G, autos = rng.choice(small_p_groups)
        alpha = rng.choice(autos)
        g0 = tuple(rng.randrange(m) for m in G.mods)
        check = affine_order_check(g0, alpha)
        assert check.equal, (G.label, alpha.entries, g0)


def test_large_inversion_shares_have_form_k_plus_one_over_two_k():
    specs = [Dihedral(n, 1) for n in range(3, 21)] + [Dicyclic(n, 1) for n in range(4, 21, 2)]
    for spec in specs:
        G = spec.group()
        for img in enum_group_automorphisms(G):
            share = inversion_fraction(img, G)
            if share > Fraction(1, 2):
                k = 1 / (2 * share - 1)
                assert k.denominator == 1, (spec.render(), share)


@pytest.mark.parametrize("rho", ["1/2", "2/3", "3/4"])
def test_classified_instances_have_a_power_inverting_more_than_lambda(rho):
    checked = 0
    for d in classify_rho(rho).descriptors:
        for spec in expand(d, 60):
            if spec.order < 2:
                continue
            check = inversion_lemma_check(evaluate(spec))
            assert check.lam == check.quotient_lam == Fraction(rho)
            assert check.holds, (spec.render(), check)
            checked += 1
    assert checked > 0
