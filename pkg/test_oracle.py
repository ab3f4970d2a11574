"""
Completeness sweep: every automorphism class with λ >= 1/2 of an abelian
group of small order is produced by exactly one classifier instance.
"""

import itertools
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

from app.algebra.abelian import AbelianPGroup, cycle_structure
from app.algebra.classify import HALF, classify_elementary_abelian
from app.algebra.fdg import MatrixVec, evaluate, frobenius_decompose
from app.algebra.linalg import rank_mod_p
from app.algebra.oracle import abelian_groups, elementary_classes, run_oracle, sylow_classes


def test_abelian_groups():
    assert [G.label for G in abelian_groups(1)] == ["1"]
    assert {G.label for G in abelian_groups(16)} == {"Z16", "Z2 x Z8", "Z4^2", "Z2^2 x Z4", "Z2^4"}
    assert len(abelian_groups(72)) == 6
    assert len(abelian_groups(97)) == 1


@pytest.mark.parametrize("p,n,count", [(2, 1, 1), (3, 1, 2), (2, 2, 3), (2, 3, 6), (3, 2, 8)])
def test_elementary_classes_count_gl_classes(p, n, count):
    assert len(elementary_classes(p, n)) == count


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_elementary_classes_match_exhaustive_search(p, n):
    found: dict[tuple, set] = {}
    for flat in itertools.product(range(p), repeat=n * n):
        A = tuple(flat[i * n:(i + 1) * n] for i in range(n))
        if rank_mod_p(A, p) < n:
            continue
        cs = cycle_structure(evaluate(MatrixVec(p, A)))
        if cs.lam >= HALF:
            found.setdefault(tuple(frobenius_decompose(A, p)), set()).add(cs)
    assert all(len(structures) == 1 for structures in found.values())
    brute = {blocks: structures.pop() for blocks, structures in found.items()}
    classes = {c.signature[2]: c.structure for c in sylow_classes(AbelianPGroup(p, (1,) * n))}
    assert brute == classes
    assert {cs.lam for cs in brute.values()} == {d.lam for d in classify_elementary_abelian(p, n, "ge_half")}


def test_sylow_classes_klein():
    classes = sylow_classes(AbelianPGroup(2, (1, 1)))
    assert sorted(c.structure.lam for c in classes) == [Fraction(1, 2), Fraction(3, 4)]


def test_oracle_sixteen():
    report = run_oracle(16)
    assert report.groups_checked == 25
    assert report.skipped == []
    assert report.ok, (report.unmatched, report.duplicated, report.missing)
    assert {Fraction(1), Fraction(3, 4), Fraction(2, 3), Fraction(1, 2)} <= set(report.values)


def test_oracle_thirty():
    report = run_oracle(30)
    assert report.ok, (report.unmatched, report.duplicated, report.missing)


def test_oracle_skips_over_capacity():
    report = run_oracle(8, capacity=4)
    assert set(report.skipped) == {"Z8", "Z2 x Z4"}
    assert report.ok


@pytest.mark.slow
def test_oracle_two_hundred():
    report = run_oracle(200)
    assert report.ok, (report.unmatched, report.duplicated, report.missing)
