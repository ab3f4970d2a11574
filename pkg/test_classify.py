"""
Tests for the ρ-classifier: worked values, descriptor templates and counts,
λ-maximality, expansion and group-level classification.
"""

import sys
from fractions import Fraction
from math import gcd
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

from app.algebra.abelian import AbelianPGroup, EndoMatrix, cycle_structure, enum_autos, lambda_group
from app.algebra.classify import (
    BOUNDARY_Z2_Z4,
    EMPTY_TWO_ODD_PRIMES,
    Rho,
    affine_full_cycle_classify,
    canonical_conjugate,
    classify_elementary_abelian,
    classify_group_lambda,
    classify_rho,
    coprime_partitions,
    expand,
    is_lambda_maximal,
    shape_of,
)
from app.algebra.fdg import Dihedral, evaluate, lambda_of_spec, parse_spec
from app.errors import DomainError


def _templates(rho):
    return [d.template for d in classify_rho(rho).descriptors]


def test_rho_parsing():
    assert Rho.parse("6/8") == Rho(3, 4)
    assert str(Rho.parse(" 2 / 3 ")) == "2/3"
    assert Rho.parse("1").value == 1
    for bad in ("abc", "1/3", "5/4", "0/1"):
        with pytest.raises(DomainError):
            Rho.parse(bad)


def test_coprime_partitions():
    assert list(coprime_partitions(5)) == [(2, 3), (5,)]
    assert list(coprime_partitions(6)) == [(6,)]
    assert list(coprime_partitions(0)) == [()]
    assert (2, 3, 5) in list(coprime_partitions(10))


def test_three_quarters():
    result = classify_rho("3/4")
    assert result.empty_reason is None
    assert result.flags == ()
    rows = [(d.template, d.lambda_maximal, d.witness_count, d.group_label) for d in result.descriptors]
    assert rows == [
        ("V(P2@2)", True, 1, "Z2^2"),
        ("V(P3@2) * M(7,g)", True, 4, "Z2^3 x Z7"),
        ("V(P4@2) * M(5,g)", True, 4, "Z2^4 x Z5"),
    ]
    assert all(d.kind == "finite" and d.abelian for d in result.descriptors)


def test_two_thirds():
    result = classify_rho(Fraction(2, 3))
    family, square, mixed = result.descriptors
    assert family.template == "M(3^m,g)"
    assert family.kind == "family"
    assert family.witness_count is None
    assert family.lambda_maximal
    assert family.group_label == "Z(3^m)"
    assert "m >= 1" in family.side_conditions
    assert square.template == "V((x-g)^2@3)"
    assert not square.lambda_maximal
    assert square.witness_count == 1
    assert mixed.template == "V(P2@2) * V(P2@3)"
    assert mixed.lambda_maximal


def test_seven_twelfths():
    result = classify_rho("7/12")
    rows = [(d.template, d.lambda_maximal) for d in result.descriptors]
    assert rows == [
        ("V(P3@2) * M(3,g)", True),
        ("V(P3@2) * M(3^m,g)", True),
        ("V(P3@2) * V((x-g)^2@3)", False),
        ("V(P2@2) * V(P3@2) * V(P2@3)", False),
    ]
    assert "m >= 2" in result.descriptors[1].side_conditions


def test_one_half():
    result = classify_rho("1/2")
    assert len(result.descriptors) == 10
    by_template = {d.template: d for d in result.descriptors}
    for t in ("M(2,1)", "M(4,3)", "E(Z2 x Z4,[[1,1],[2,1]])", "V(P2@2) * M(3,g)"):
        assert by_template[t].lambda_maximal
    for t in ("V(x^2+1@2)", "V(x^3+x^2+x+1@2)"):
        assert not by_template[t].lambda_maximal
    families = [d for d in result.descriptors if not d.abelian]
    assert sorted(d.template for d in families) == ["DK(o,m)", "Dic(n,m)", "DicK(o,m)", "Dih(n,m)"]


def test_one():
    (desc,) = classify_rho("1").descriptors
    assert desc.template == "1"
    assert desc.witness_count == 1
    assert desc.lambda_maximal


def test_empty_when_two_odd_primes():
    result = classify_rho("14/15")
    assert result.descriptors == ()
    assert result.empty_reason == EMPTY_TWO_ODD_PRIMES


def _two_odd_prime_rhos():
    out = []
    for b in (15, 21, 35, 45, 63, 105):
        out += [Fraction(a, b) for a in range((b + 1) // 2, b) if gcd(a, b) == 1]
    return out[:20]


@pytest.mark.parametrize("rho", [Fraction(8, 15)] + _two_odd_prime_rhos())
def test_empty_denominators(rho):
    assert classify_rho(f"{rho.numerator}/{rho.denominator}").descriptors == ()


@pytest.mark.parametrize(
    "rho,template",
    [
        ("3/5", "V(P2@2) * M(5,g)"),
        ("3/5", "V(P2@2) * M(5^m,g)"),
        ("3/5", "V(P2@2) * V((x-g)^2@5)"),
        ("5/8", "V(P4@2) * M(3,g)"),
        ("21/32", "V(P6@2) * M(3,g)"),
        ("21/32", "V(P2@2) * V(P3@2)"),
    ],
)
def test_descriptor_present(rho, template):
    assert template in _templates(rho)


def test_expand_root_family():
    family = classify_rho("2/3").descriptors[0]
    specs = expand(family, 30)
    assert len(specs) == 9
    assert {s.order for s in specs} == {3, 9, 27}
    assert all(lambda_of_spec(s) == Fraction(2, 3) for s in specs)
    with pytest.raises(DomainError):
        list(family.instances())


def test_expand_three_quarters():
    specs = [s for d in classify_rho("3/4").descriptors for s in expand(d, 100)]
    assert len(specs) == 9
    assert all(lambda_of_spec(s) == Fraction(3, 4) for s in specs)
    assert all(is_lambda_maximal(s) for s in specs)
    assert {s.order for s in specs} == {4, 56, 80}
    assert all(cycle_structure(evaluate(s)).lam == Fraction(3, 4) for s in specs)


def test_expand_half_families():
    dih = next(d for d in classify_rho("1/2").descriptors if d.template == "Dih(n,m)")
    specs = expand(dih, 18)
    assert [s.render() for s in specs] == [
        "Dih(3,1)", "Dih(4,1)", "Dih(5,1)", "Dih(6,1)", "Dih(7,1)", "Dih(8,1)",
        "Dih(8,5)", "Dih(9,1)", "Dih(9,4)", "Dih(9,7)",
    ]
    assert all(lambda_of_spec(s) == Fraction(1, 2) for s in specs)


def test_is_lambda_maximal():
    assert is_lambda_maximal(parse_spec("M(9,2)"))
    assert not is_lambda_maximal(parse_spec("V((x-2)^2@3)"))
    assert not is_lambda_maximal(parse_spec("V(x^2+x+1@2) * V(x^3+x+1@2)"))
    assert is_lambda_maximal(parse_spec("M(4,3)"))
    assert not is_lambda_maximal(parse_spec("V(x^2+1@2)"))
    assert is_lambda_maximal(Dihedral(9, 4))
    assert not is_lambda_maximal(Dihedral(9, 2))


def test_shape_rejects_unclassified():
    with pytest.raises(DomainError):
        shape_of(parse_spec("M(15,2)"))
    with pytest.raises(DomainError):
        shape_of(parse_spec("M(3,2) * M(5,2)"))


def test_canonical_conjugate_is_class_invariant():
    G = AbelianPGroup(2, (1, 2))
    A = EndoMatrix(G, BOUNDARY_Z2_Z4)
    ref = canonical_conjugate(A)
    for g in enum_autos(G):
        conj = g.compose(A).compose(g.power(g.order() - 1))
        assert canonical_conjugate(conj) == ref


def test_classify_elementary_abelian():
    assert [d.template for d in classify_elementary_abelian(2, 5)] == ["V(P2@2) * V(P3@2)", "V(P5@2)"]
    (boundary,) = classify_elementary_abelian(2, 3, "eq_half")
    assert boundary.template == "V(x^3+x^2+x+1@2)"
    assert not boundary.lambda_maximal
    odd = {d.template: d for d in classify_elementary_abelian(3, 2)}
    assert odd["V(P2@3)"].lam == Fraction(8, 9)
    assert odd["V(P2@3)"].lambda_maximal
    assert odd["V((x-g)^2@3)"].lam == Fraction(2, 3)
    assert not odd["V((x-g)^2@3)"].lambda_maximal
    with pytest.raises(DomainError):
        classify_elementary_abelian(2, 3, "lt_half")


def test_classify_group_lambda():
    assert [g.group for g in classify_group_lambda("3/4")] == ["Z2^2", "Z2^3 x Z7", "Z2^4 x Z5"]
    groups = {g.group: g for g in classify_group_lambda("2/3")}
    assert set(groups) == {"Z(3^m)", "Z2^2 x Z3^2"}
    assert groups["Z(3^m)"].infinite
    assert not groups["Z2^2 x Z3^2"].infinite


@pytest.mark.parametrize("group,rho", [("Z2^2", "3/4"), ("Z2^3 x Z7", "3/4"), ("Z2^2 x Z3^2", "2/3"), ("Z9", "2/3")])
def test_group_lambda_agrees_with_enumeration(group, rho):
    assert lambda_group(group) == Fraction(rho)


def test_affine_full_cycle_classify():
    z4 = affine_full_cycle_classify("Z4")
    assert (z4.kind, z4.multipliers, z4.count) == ("cyclic", (1,), 2)
    assert affine_full_cycle_classify("Z9").count == 18
    klein = affine_full_cycle_classify("Z2^2 x Z3")
    assert (klein.kind, klein.count) == ("klein", 12)
    assert affine_full_cycle_classify("Z2^3") is None
