"""
Desk-scale completeness sweep.

Every abelian group of order <= N is split into Sylow parts. Conjugacy
classes of automorphisms are listed per part (rational canonical forms for
elementary parts, Hillar-Rhea enumeration otherwise), combined across
parts, and every class with λ >= 1/2 is matched by signature against the
instances of `classify_rho` at its λ-value.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from sympy.utilities.iterables import partitions

from app.algebra.abelian import AbelianGroupType, AbelianPGroup, CycleStructure, cycle_structure, enum_autos
from app.algebra.classify import HALF, automorphism_signature, classify_rho, signature
from app.algebra.fdg import MatrixVec, evaluate
from app.algebra.ffpoly import FpPoly, companion, enum_irreducible
from app.algebra.linalg import block_diag
from app.algebra.numtheory import factor
from app.config import get_settings
from app.errors import CapacityError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SylowClass:
    signature: tuple
    structure: CycleStructure


def _block_multisets(atoms: list[tuple[FpPoly, int]], n: int, start: int = 0):
    if n == 0:
        yield ()
        return
    for i in range(start, len(atoms)):
        P, k = atoms[i]
        size = P.degree * k
        if size <= n:
            for rest in _block_multisets(atoms, n - size, i):
                yield ((P, k),) + rest


def elementary_classes(p: int, n: int) -> list[tuple[tuple[FpPoly, int], ...]]:
    """Every conjugacy class of GL_n(F_p), as its sorted primary Frobenius blocks."""
    atoms = []
    for d in range(1, n + 1):
        for P in enum_irreducible(p, d):
            atoms.extend((P, k) for k in range(1, n // d + 1))
    atoms.sort(key=lambda b: (b[0].sort_key(), b[1]))
    return list(_block_multisets(atoms, n))


@lru_cache(maxsize=512)
def sylow_classes(P: AbelianPGroup, rho_min: Fraction = HALF, capacity: int | None = None) -> tuple[SylowClass, ...] | None:
    """Classes of Aut(P) with λ >= rho_min; None when P is over the candidate cap."""
    p = P.p
    out: dict[tuple, SylowClass] = {}
    if P.is_elementary:
        for blocks in elementary_classes(p, P.rank):
            A = block_diag(*(companion(Q**k).rows for Q, k in blocks))
            cs = cycle_structure(evaluate(MatrixVec(p, A)))
            if cs.lam >= rho_min:
                sig = (p, "elem", blocks)
                out[sig] = SylowClass(sig, cs)
        return tuple(out.values())
    bound = get_settings().oracle_candidates if capacity is None else capacity
    try:
        autos = list(enum_autos(P, capacity=bound))
    except CapacityError as exc:
        logger.warning(f"oracle: skipping {P.label}: {exc}")
        return None
    for A in autos:
        cs = cycle_structure(A)
        if cs.lam < rho_min:
            continue
        sig = automorphism_signature(P, A)
        if sig not in out:
            out[sig] = SylowClass(sig, cs)
    return tuple(out.values())


def abelian_groups(order: int) -> list[AbelianGroupType]:
    """All abelian groups of the given order, one per isomorphism type."""
    if order == 1:
        return [AbelianGroupType(())]
    per_prime = []
    for p, e in factor(order):
        options = []
        for part in partitions(e):
            exps = sorted(k for k, mult in part.items() for _ in range(mult))
            options.append(AbelianPGroup(p, tuple(exps)))
        per_prime.append(options)
    return [AbelianGroupType(tuple(combo)) for combo in itertools.product(*per_prime)]


@dataclass
class OracleReport:
    max_order: int
    groups_checked: int = 0
    classes_seen: int = 0
    values: list[Fraction] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    unmatched: list[str] = field(default_factory=list)
    duplicated: list[str] = field(default_factory=list)
    missing: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.unmatched or self.duplicated or self.missing)


def run_oracle(max_order: int, rho_min: Fraction = HALF, capacity: int | None = None) -> OracleReport:
    """Cross-check `classify_rho` against exhaustive enumeration up to max_order."""
    report = OracleReport(max_order=max_order)
    seen: dict[Fraction, dict[tuple, str]] = {}
    skipped_parts: set[tuple[int, tuple[int, ...]]] = set()
    for n in range(1, max_order + 1):
        for G in abelian_groups(n):
            report.groups_checked += 1
            per_part = []
            for P in G.parts:
                classes = sylow_classes(P, rho_min, capacity)
                if classes is None:
                    skipped_parts.add((P.p, P.exponents))
                    report.skipped.append(G.label)
                    break
                per_part.append(classes)
            else:
                for combo in itertools.product(*per_part):
                    cs = CycleStructure.trivial()
                    for c in combo:
                        cs = cs.join(c.structure)
                    if cs.lam < rho_min:
                        continue
                    sig = tuple(c.signature for c in combo)
                    seen.setdefault(cs.lam, {})[sig] = G.label
                    report.classes_seen += 1
        if n % 50 == 0:
            logger.info(f"oracle: swept orders <= {n}, {report.classes_seen} classes")

    report.values = sorted(seen)
    for lam in report.values:
        observed = seen[lam]
        owners: dict[tuple, list[str]] = {}
        result = classify_rho(lam, self_check=False)
        for desc in result.descriptors:
            if not desc.abelian or desc.min_order > max_order:
                continue
            for spec in desc.instances(max_order):
                owners.setdefault(signature(spec), []).append(f"{desc.template} [{spec.render()}]")
        for sig, group in observed.items():
            if sig not in owners:
                report.unmatched.append(f"λ = {lam} on {group}: {sig}")
            elif len(owners[sig]) > 1:
                report.duplicated.append(f"λ = {lam}: {' / '.join(owners[sig])}")
        for sig, names in owners.items():
            if sig in observed:
                continue
            if any(entry[1] == "gen" and (entry[0], entry[2]) in skipped_parts for entry in sig):
                continue
            report.missing.append(f"λ = {lam}: {names[0]}")
    logger.info(
        f"oracle: {report.groups_checked} groups, {report.classes_seen} classes, "
        f"{len(report.unmatched)} unmatched, {len(report.duplicated)} duplicated, {len(report.missing)} missing"
    )
    return report
