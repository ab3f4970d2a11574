"""
The ρ-classifier: every periodic FDG (G, α) with λ(α) = ρ for ρ in [1/2, 1],
as a finite list of descriptors. Finite descriptors stand for a finite set
of pairwise non-isomorphic instances (one per choice of primitive polynomial
or primitive root); family descriptors carry side conditions on parameters
that range over infinitely many values.

Primary orders are handled directly. Orders with two prime divisors go
through the full-divisor loop: the 2-part is a product of V(P_i) with P_i
primitive over F_2, and t_i = 2^d_i - 1 for i >= 2 (t_1 with the odd prime
cancelled) are full divisors of the numerator.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, prod
from typing import Iterator

from app.algebra.abelian import AbelianPGroup, EndoMatrix, as_group_type, cycle_structure, enum_autos
from app.algebra.fdg import (
    FAMILIES,
    Dihedral,
    DKlein,
    FdgSpec,
    GenericAbelian,
    MatrixVec,
    Mult,
    PolyVec,
    Product,
    evaluate,
    family_m_values,
    frobenius_decompose,
)
from app.algebra.ffpoly import (
    FpPoly,
    count_primitive,
    enum_primitive,
    first_primitive,
    is_primitive,
    parse_poly,
)
from app.algebra.numtheory import (
    euler_phi,
    factor,
    first_primitive_root,
    full_divisors,
    is_prime_power,
    mult_order,
    primitive_roots,
    t0_set,
    valuation,
)
from app.config import get_settings
from app.errors import ClassificationError, DomainError

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)

EMPTY_TWO_ODD_PRIMES = "denominator has two distinct odd primes"
EMPTY_NO_SOLUTION = "no periodic FDG attains this value"
CONSERVATIVE_DEDUP = "conservative-dedup"


@dataclass(frozen=True)
class Rho:
    a: int
    b: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise DomainError(f"ρ needs positive numerator and denominator, got {self.a}/{self.b}")
        g = gcd(self.a, self.b)
        object.__setattr__(self, "a", self.a // g)
        object.__setattr__(self, "b", self.b // g)
        if not HALF <= self.value <= 1:
            raise DomainError(f"ρ = {self.a}/{self.b} is outside [1/2, 1]")

    @classmethod
    def parse(cls, text: str) -> Rho:
        m = re.fullmatch(r"\s*(\d+)\s*/\s*(\d+)\s*", text)
        if not m:
            if text.strip() == "1":
                return cls(1, 1)
            raise DomainError(f"expected ρ as a/b, got {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    @property
    def value(self) -> Fraction:
        return Fraction(self.a, self.b)

    def __str__(self) -> str:
        return f"{self.a}/{self.b}"


def as_rho(rho: Rho | Fraction | str) -> Rho:
    if isinstance(rho, Rho):
        return rho
    if isinstance(rho, str):
        return Rho.parse(rho)
    f = Fraction(rho)
    return Rho(f.numerator, f.denominator)


# --- descriptor slots -----------------------------------------------------------

@dataclass(frozen=True)
class Slot:
    """One factor of a descriptor template.

    kinds: poly (V(P), P primitive of degree d over F_p), root (M(p^d, g)),
    square (V((x-g)^2) over F_p), fixed (one spec), root-family
    (M(p^m, g) for m >= d) and family (a nonabelian λ = 1/2 family).
    """

    kind: str
    p: int = 0
    d: int = 0
    spec: FdgSpec | None = None
    family: str = ""

    @property
    def is_finite(self) -> bool:
        return self.kind not in ("root-family", "family")

    @property
    def template(self) -> str:
        if self.kind == "poly":
            return f"V(P{self.d}@{self.p})"
        if self.kind == "root":
            return f"M({self.p ** self.d},g)"
        if self.kind == "square":
            return f"V((x-g)^2@{self.p})"
        if self.kind == "fixed":
            return self.spec.render()
        if self.kind == "root-family":
            return f"M({self.p}^m,g)"
        var = "o" if self.family in ("DK", "DicK") else "n"
        return f"{self.family}({var},m)"

    @property
    def conditions(self) -> tuple[str, ...]:
        if self.kind == "poly":
            return (f"P{self.d}@{self.p} monic primitive of degree {self.d} over F_{self.p}",)
        if self.kind == "root":
            return (f"g primitive root mod {self.p ** self.d}",)
        if self.kind == "square":
            return (f"g generates F_{self.p}^*",)
        if self.kind == "root-family":
            return (f"m >= {self.d}", f"g primitive root mod {self.p}^m")
        if self.kind == "family":
            var = "o" if self.family in ("DK", "DicK") else "n"
            base = {
                "Dih": "n >= 3",
                "Dic": "n even, n >= 4",
                "DK": "o odd, o >= 3",
                "DicK": "o odd, o >= 3",
            }[self.family]
            out = [base, f"m in Z_{var}, m ≡ 1 mod every prime dividing {var}"]
            if self.family in ("Dih", "Dic"):
                out.append("m ≡ 1 mod 4 if 4 | n")
            return tuple(out)
        return ()

    @property
    def count(self) -> int | None:
        if self.kind == "poly":
            return count_primitive(self.p, self.d)
        if self.kind == "root":
            q = self.p**self.d
            return 1 if q in (2, 4) else euler_phi(euler_phi(q))
        if self.kind == "square":
            return euler_phi(self.p - 1)
        if self.kind == "fixed":
            return 1
        return None

    @property
    def order(self) -> int | None:
        if self.kind in ("poly", "root"):
            return self.p**self.d
        if self.kind == "square":
            return self.p**2
        if self.kind == "fixed":
            return self.spec.order
        return None

    @property
    def min_order(self) -> int:
        if self.is_finite:
            return self.order
        if self.kind == "root-family":
            return self.p**self.d
        return {"Dih": 6, "Dic": 8, "DK": 24, "DicK": 24}[self.family]

    @property
    def group_part(self) -> str:
        if self.kind == "poly":
            return f"Z{self.p}^{self.d}" if self.d > 1 else f"Z{self.p}"
        if self.kind == "root":
            return f"Z{self.p ** self.d}"
        if self.kind == "square":
            return f"Z{self.p}^2"
        if self.kind == "fixed":
            return evaluate(self.spec).group.name if self.spec.order > 1 else "1"
        if self.kind == "root-family":
            return f"Z({self.p}^m)"
        return {"Dih": "D2n", "Dic": "Dic2n", "DK": "D(Z2^2 x Zo)", "DicK": "Dic(Z2^2 x Zo)"}[self.family]

    def options(self, max_order: int | None = None) -> Iterator[FdgSpec]:
        if self.is_finite and max_order is not None and self.order > max_order:
            return
        if self.kind == "poly":
            yield from (PolyVec(P) for P in enum_primitive(self.p, self.d))
        elif self.kind == "root":
            yield from (Mult(self.p**self.d, g) for g in primitive_roots(self.p, self.d))
        elif self.kind == "square":
            yield from (PolyVec(_square(self.p, g)) for g in primitive_roots(self.p, 1))
        elif self.kind == "fixed":
            yield self.spec
        elif self.kind == "root-family":
            if max_order is None:
                raise DomainError("expanding an infinite family needs an order bound")
            m = self.d
            while self.p**m <= max_order:
                for g in primitive_roots(self.p, m):
                    yield Mult(self.p**m, g)
                m += 1
        else:
            if max_order is None:
                raise DomainError("expanding an infinite family needs an order bound")
            cls = FAMILIES[self.family]
            for n in _family_parameters(self.family, max_order):
                for m in family_m_values(self.family, n):
                    yield cls(n, m)

    def first(self, max_order: int) -> FdgSpec | None:
        """Cheapest instance within the bound, without enumerating all options."""
        if self.kind == "poly":
            return PolyVec(first_primitive(self.p, self.d)) if self.order <= max_order else None
        if self.kind == "root":
            return Mult(self.p**self.d, first_primitive_root(self.p, self.d)) if self.order <= max_order else None
        if self.kind == "square":
            return PolyVec(_square(self.p, first_primitive_root(self.p))) if self.order <= max_order else None
        return next(self.options(max_order), None)


def _square(p: int, g: int) -> FpPoly:
    lin = FpPoly(p, (-g, 1))
    return lin * lin


def _family_parameters(kind: str, max_order: int) -> list[int]:
    if kind == "Dih":
        return list(range(3, max_order // 2 + 1))
    if kind == "Dic":
        return list(range(4, max_order // 2 + 1, 2))
    return list(range(3, max_order // 8 + 1, 2))


@dataclass(frozen=True)
class IsoClassDescriptor:
    slots: tuple[Slot, ...]
    lam: Fraction
    lambda_maximal: bool
    flags: tuple[str, ...] = ()

    @property
    def kind(self) -> str:
        return "finite" if all(s.is_finite for s in self.slots) else "family"

    @property
    def abelian(self) -> bool:
        return all(s.kind != "family" for s in self.slots)

    @property
    def template(self) -> str:
        return " * ".join(s.template for s in self.slots) or "1"

    @property
    def side_conditions(self) -> tuple[str, ...]:
        return tuple(c for s in self.slots for c in s.conditions)

    @property
    def witness_count(self) -> int | None:
        counts = [s.count for s in self.slots]
        if any(c is None for c in counts):
            return None
        return prod(counts)

    @property
    def order(self) -> int | None:
        orders = [s.order for s in self.slots]
        if any(o is None for o in orders):
            return None
        return prod(orders)

    @property
    def min_order(self) -> int:
        return prod(s.min_order for s in self.slots)

    @property
    def group_label(self) -> str:
        parts = [s.group_part for s in self.slots if s.group_part != "1"]
        two_rank = sum(s.d for s in self.slots if s.kind == "poly" and s.p == 2)
        rest = [s.group_part for s in self.slots if not (s.kind == "poly" and s.p == 2) and s.group_part != "1"]
        if two_rank:
            parts = [f"Z2^{two_rank}" if two_rank > 1 else "Z2"] + rest
        return " x ".join(parts) or "1"

    def sort_key(self) -> tuple:
        primes = tuple(sorted({s.p for s in self.slots}))
        ftype = tuple(sorted(s.d for s in self.slots if s.kind == "poly" and s.p == 2))
        return (self.min_order, primes, ftype, self.template)

    def instances(self, max_order: int | None = None) -> Iterator[FdgSpec]:
        if self.kind == "family" and max_order is None:
            raise DomainError(f"{self.template} is an infinite family; give an order bound")
        pools = [list(s.options(max_order)) for s in self.slots]
        for combo in itertools.product(*pools):
            spec = combo[0] if len(combo) == 1 else Product(tuple(combo))
            if max_order is None or spec.order <= max_order:
                yield spec

    def first_instance(self, max_order: int) -> FdgSpec | None:
        firsts = [s.first(max_order) for s in self.slots]
        if any(f is None for f in firsts):
            return None
        spec = firsts[0] if len(firsts) == 1 else Product(tuple(firsts))
        return spec if spec.order <= max_order else None


def expand(descriptor: IsoClassDescriptor, max_order: int) -> list[FdgSpec]:
    """Instantiate a descriptor up to a group-order bound."""
    return list(descriptor.instances(max_order))


@dataclass(frozen=True)
class ClassificationResult:
    rho: Rho
    descriptors: tuple[IsoClassDescriptor, ...]
    empty_reason: str | None = None
    flags: tuple[str, ...] = ()


# --- combinatorics ----------------------------------------------------------------

def coprime_partitions(total: int, min_part: int = 2) -> Iterator[tuple[int, ...]]:
    """Ascending tuples of pairwise coprime parts >= min_part summing to total."""

    def rec(rest: int, lo: int, chosen: tuple[int, ...]):
        if rest == 0:
            yield chosen
            return
        for part in range(lo, rest + 1):
            if all(gcd(part, c) == 1 for c in chosen):
                yield from rec(rest - part, part + 1, chosen + (part,))

    if total == 0:
        yield ()
        return
    yield from rec(total, min_part, ())


def _log2_exact(n: int) -> int | None:
    if n < 1 or n & (n - 1):
        return None
    return n.bit_length() - 1


def _pairwise_coprime(values) -> bool:
    return all(gcd(x, y) == 1 for x, y in itertools.combinations(values, 2))


def frobenius_lambda(degrees) -> Fraction:
    out = Fraction(1)
    for d in degrees:
        out *= Fraction(2**d - 1, 2**d)
    return out


# --- λ-maximality -------------------------------------------------------------------

def l_set(kind: str, p: int, m: int) -> tuple[int, ...]:
    """Largest cycle lengths L(G_p) competing at the odd prime."""
    if kind == "cyc" or (kind == "elem" and m == 1):
        return (p ** (m - 1) * (p - 1),)
    if kind == "elem" and m > 2:
        return (p**m - 1,)
    return (p**2 - 1, p**2 - p)


def odd_Lambda(kind: str, p: int, m: int) -> int:
    if kind == "cyc":
        return p ** (m - 1) * (p - 1)
    if kind == "sq":
        return p * (p - 1)
    return p**m - 1


def mixed_is_maximal(degrees: tuple[int, ...], kind: str, p: int, m: int) -> bool:
    """No other coprime decomposition of the 2-rank beats ∏(2^d_i - 1)·Λ(α_p)."""
    base = prod(2**d - 1 for d in degrees) * odd_Lambda(kind, p, m)
    for parts in coprime_partitions(sum(degrees)):
        lengths = [2**d - 1 for d in parts]
        for L in l_set(kind, p, m):
            if all(gcd(x, L) == 1 for x in lengths) and prod(lengths) * L > base:
                return False
    return True


@dataclass(frozen=True)
class Shape:
    """A classified shape: the 2-part and at most one odd Sylow part."""

    two_degrees: tuple[int, ...] = ()
    two_special: str | None = None
    odd: tuple[str, int, int] | None = None


def shape_is_maximal(shape: Shape) -> bool:
    if shape.two_special is not None:
        if shape.odd is not None:
            raise DomainError("boundary 2-group classes have no odd part")
        return shape.two_special in ("Z4:3", "Z2xZ4")
    if shape.odd is None:
        return len(shape.two_degrees) <= 1
    kind, p, m = shape.odd
    if not shape.two_degrees:
        return kind != "sq"
    return mixed_is_maximal(shape.two_degrees, kind, p, m)


# --- signatures (conjugacy invariants) ----------------------------------------------

BOUNDARY_Z2_Z4 = ((1, 1), (2, 1))


@lru_cache(maxsize=64)
def _autos_with_inverses(G: AbelianPGroup) -> tuple[tuple[EndoMatrix, EndoMatrix], ...]:
    return tuple((A, A.power(A.order() - 1)) for A in enum_autos(G))


def canonical_conjugate(A: EndoMatrix) -> tuple[tuple[int, ...], ...]:
    """Lexicographically least matrix in the conjugacy class of A inside Aut(G)."""
    return min(g.compose(A).compose(g_inv).entries for g, g_inv in _autos_with_inverses(A.group))


def automorphism_signature(G: AbelianPGroup, A: EndoMatrix) -> tuple:
    p = G.p
    if G.is_elementary:
        return (p, "elem", tuple(frobenius_decompose(A.entries, p)))
    if G.rank == 1:
        return (p, "cyc", G.exponents[0], A.entries[0][0])
    return (p, "gen", G.exponents, canonical_conjugate(A))


def _factor_signature(spec: FdgSpec) -> tuple | None:
    if isinstance(spec, Mult):
        if spec.m == 1:
            return None
        pk = is_prime_power(spec.m)
        if pk is None:
            raise DomainError(f"{spec.render()} does not have prime power order")
        p, k = pk
        if k == 1:
            return (p, "elem", tuple(frobenius_decompose(((spec.a,),), p)))
        return (p, "cyc", k, spec.a)
    if isinstance(spec, PolyVec):
        spec = spec.as_matrix_vec()
    if isinstance(spec, MatrixVec):
        if is_prime_power(spec.m) is None or is_prime_power(spec.m)[1] != 1:
            raise DomainError(f"{spec.render()} is not over a prime field")
        return (spec.m, "elem", tuple(frobenius_decompose(spec.matrix, spec.m)))
    if isinstance(spec, GenericAbelian):
        if spec.translation is not None:
            raise DomainError("affine specs have no automorphism signature")
        return automorphism_signature(spec.group, spec.endo)
    raise DomainError(f"{spec.render()} has no abelian signature")


def signature(spec: FdgSpec) -> tuple:
    """Per-prime conjugacy invariant of an abelian spec."""
    factors = spec.factors if isinstance(spec, Product) else (spec,)
    per_prime: dict[int, list[tuple]] = {}
    for f in factors:
        sig = _factor_signature(f)
        if sig is not None:
            per_prime.setdefault(sig[0], []).append(sig)
    out = []
    for p in sorted(per_prime):
        sigs = per_prime[p]
        if len(sigs) == 1:
            out.append(sigs[0])
        elif all(s[1] == "elem" for s in sigs):
            blocks = sorted((b for s in sigs for b in s[2]), key=lambda b: (b[0].sort_key(), b[1]))
            out.append((p, "elem", tuple(blocks)))
        else:
            raise DomainError(f"cannot combine Sylow {p} factors of {spec.render()}")
    return tuple(out)


def _shape_from_signature(sig: tuple) -> Shape:
    two_degrees: tuple[int, ...] = ()
    two_special = None
    odd = None
    for entry in sig:
        p, kind = entry[0], entry[1]
        if p == 2:
            if kind == "elem":
                blocks = entry[2]
                if len(blocks) == 1 and blocks[0][0] == FpPoly(2, (1, 1)) and blocks[0][1] in (2, 3):
                    two_special = f"(x+1)^{blocks[0][1]}"
                elif all(k == 1 for _, k in blocks) and all(is_primitive(P) for P, _ in blocks) and len(
                    {P for P, _ in blocks}
                ) == len(blocks):
                    two_degrees = tuple(sorted(P.degree for P, _ in blocks))
                else:
                    raise DomainError("2-part is not a classified Frobenius shape")
            elif kind == "cyc" and entry[2] == 2 and entry[3] == 3:
                two_special = "Z4:3"
            elif kind == "gen" and entry[2] == (1, 2):
                ref = canonical_conjugate(EndoMatrix(AbelianPGroup(2, (1, 2)), BOUNDARY_Z2_Z4))
                if entry[3] != ref:
                    raise DomainError("Z2 x Z4 automorphism is not the classified one")
                two_special = "Z2xZ4"
            else:
                raise DomainError("2-part is outside the classified shapes")
            continue
        if odd is not None:
            raise DomainError("more than one odd prime in a classified shape")
        if kind == "elem":
            blocks = entry[2]
            if len(blocks) == 1 and blocks[0][1] == 1 and is_primitive(blocks[0][0]):
                odd = ("elem", p, blocks[0][0].degree)
            elif len(blocks) == 1 and blocks[0][1] == 2 and blocks[0][0].degree == 1:
                g = -blocks[0][0].coeffs[0] % p
                if mult_order(g, p) != p - 1:
                    raise DomainError("(x-g)^2 needs a generator g")
                odd = ("sq", p, 2)
            else:
                raise DomainError(f"Sylow {p} part is outside the classified shapes")
        elif kind == "cyc":
            k, a = entry[2], entry[3]
            if mult_order(a, p**k) != euler_phi(p**k):
                raise DomainError(f"{a} is not a primitive root mod {p}^{k}")
            odd = ("cyc", p, k)
        else:
            raise DomainError(f"Sylow {p} part is outside the classified shapes")
    return Shape(two_degrees=two_degrees, two_special=two_special, odd=odd)


def shape_of(spec: FdgSpec) -> Shape:
    if isinstance(spec, (Dihedral, DKlein)):
        raise DomainError("nonabelian family members are classified by family, not by shape")
    return _shape_from_signature(signature(spec))


def is_lambda_maximal(item: IsoClassDescriptor | FdgSpec) -> bool:
    if isinstance(item, IsoClassDescriptor):
        return item.lambda_maximal
    if isinstance(item, (Dihedral, DKlein)):
        return item.is_periodic and valid_family_instance(item)
    return shape_is_maximal(shape_of(item))


def valid_family_instance(spec: Dihedral | DKlein) -> bool:
    n = spec.o if isinstance(spec, DKlein) else spec.n
    return spec.m in family_m_values(spec.kind, n)


# --- elementary abelian classification ---------------------------------------------

def _poly_descriptor(p: int, degrees, lam: Fraction, maximal: bool) -> IsoClassDescriptor:
    return IsoClassDescriptor(tuple(Slot("poly", p, d) for d in sorted(degrees)), lam, maximal)


def classify_elementary_abelian(p: int, n: int, mode: str = "gt_half") -> list[IsoClassDescriptor]:
    """Conjugacy classes of automorphisms of (Z/p)^n with λ > 1/2, = 1/2 or >= 1/2."""
    if mode not in ("gt_half", "eq_half", "ge_half"):
        raise DomainError(f"unknown mode {mode!r}")
    if n < 1:
        raise DomainError(f"rank must be >= 1, got {n}")
    want_gt = mode in ("gt_half", "ge_half")
    want_eq = mode in ("eq_half", "ge_half")
    out: list[IsoClassDescriptor] = []
    if p != 2:
        if want_gt:
            lam = Fraction(p**n - 1, p**n)
            if n == 1:
                out.append(IsoClassDescriptor((Slot("root", p, 1),), lam, True))
            else:
                out.append(_poly_descriptor(p, (n,), lam, True))
            if n == 2:
                out.append(IsoClassDescriptor((Slot("square", p),), Fraction(p - 1, p), False))
        return sorted(out, key=IsoClassDescriptor.sort_key)
    if want_eq and n in (1, 2, 3):
        if n == 1:
            out.append(_poly_descriptor(2, (1,), HALF, True))
        else:
            poly = parse_poly(f"(x+1)^{n}@2")
            out.append(IsoClassDescriptor((Slot("fixed", spec=PolyVec(poly)),), HALF, False))
    if want_gt:
        for parts in coprime_partitions(n):
            lam = frobenius_lambda(parts)
            if lam > HALF:
                out.append(_poly_descriptor(2, parts, lam, len(parts) == 1))
    return sorted(out, key=IsoClassDescriptor.sort_key)


# --- the ρ algorithm ---------------------------------------------------------------------

def _boundary_two_groups() -> list[IsoClassDescriptor]:
    specs = [
        (Mult(2, 1), True),
        (Mult(4, 3), True),
        (GenericAbelian(AbelianPGroup(2, (1, 2)), BOUNDARY_Z2_Z4), True),
        (PolyVec(parse_poly("(x+1)^2@2")), False),
        (PolyVec(parse_poly("(x+1)^3@2")), False),
    ]
    return [IsoClassDescriptor((Slot("fixed", spec=s),), HALF, m) for s, m in specs]


def _nonabelian_families() -> list[IsoClassDescriptor]:
    return [IsoClassDescriptor((Slot("family", family=k),), HALF, True) for k in ("Dih", "Dic", "DK", "DicK")]


def _primary(rho: Rho) -> list[IsoClassDescriptor]:
    a, b = rho.a, rho.b
    if b == 1:
        return [IsoClassDescriptor((Slot("fixed", spec=Product(())),), Fraction(1), True)]
    if rho.value == HALF:
        return _boundary_two_groups()
    pk = is_prime_power(b)
    if pk is None:
        return []
    p, m = pk
    out = []
    if p != 2 and m == 1 and a == p - 1:
        logger.info(f"{rho}: primary case with cyclic p-parts at p = {p}")
        out.append(IsoClassDescriptor((Slot("root-family", p, 1),), rho.value, True))
        out.append(IsoClassDescriptor((Slot("square", p),), rho.value, False))
    elif p != 2 and m >= 2 and a == b - 1:
        out.append(_poly_descriptor(p, (m,), rho.value, True))
    elif p == 2 and m >= 2:
        for parts in coprime_partitions(m):
            if prod(2**d - 1 for d in parts) == a:
                out.append(_poly_descriptor(2, parts, rho.value, len(parts) == 1))
    return out


def _subsets(pool: list[int], avoid: int) -> Iterator[tuple[int, ...]]:
    usable = [t for t in pool if gcd(t, avoid) == 1 and t != avoid]
    for r in range(len(usable) + 1):
        for combo in itertools.combinations(usable, r):
            if _pairwise_coprime(combo):
                yield combo


def _elementary_solutions(rho: Rho, p: int | None, l: int) -> list[IsoClassDescriptor]:
    """Odd part (Z/p)^m with a primitive companion; p unknown when l = 0."""
    a = rho.a
    t1_pool = [t for t in full_divisors(a) if t % 2]
    pool = [t for t in t0_set(a) if t > 1]
    out = []
    for t1 in t1_pool:
        for rest in _subsets(pool, t1):
            C = prod((Fraction(t, t + 1) for t in rest), start=Fraction(1))
            R = rho.value / C
            if R >= 1:
                continue
            if p is None:
                # ρ/C = t1(q - 1)/(q t1 + 1) solved for q = p^m
                q = (R + t1) / (t1 * (1 - R))
                if q.denominator != 1:
                    continue
                pk = is_prime_power(int(q))
                if pk is None or pk[0] == 2:
                    continue
                prime, m = pk
                cancelled = int(q)
            else:
                # ρ/C = t1(p^l x - 1)/(p^l (x t1 + 1)) solved for x = p^l'
                P = p**l
                x = (t1 + R * P) / (t1 * P * (1 - R))
                if x.denominator != 1:
                    continue
                x = int(x)
                lp = valuation(x, p) if x > 1 else 0
                if p**lp != x:
                    continue
                prime, m = p, l + lp
                cancelled = x
            d1 = _log2_exact(cancelled * t1 + 1)
            if d1 is None or d1 < 2:
                continue
            degrees = [d1] + [_log2_exact(t + 1) for t in rest]
            if not _pairwise_coprime(degrees):
                continue
            lam2 = prod(2**d - 1 for d in degrees)
            lamp = prime**m - 1
            if gcd(lam2, lamp) != 1:
                continue
            value = Fraction(lam2 * lamp, 2 ** sum(degrees) * prime**m)
            if value != rho.value:
                continue
            odd_slot = Slot("root", prime, 1) if m == 1 else Slot("poly", prime, m)
            slots = tuple(Slot("poly", 2, d) for d in sorted(degrees)) + (odd_slot,)
            maximal = mixed_is_maximal(tuple(sorted(degrees)), "elem", prime, m)
            out.append(IsoClassDescriptor(slots, rho.value, maximal))
    return out


def _cyclic_solutions(rho: Rho, p: int, flags: list[str]) -> list[IsoClassDescriptor]:
    """Odd part with λ_p = 1 - 1/p: M(p^m, g) for m >= 2, or V((x-g)^2)."""
    pool = [t for t in t0_set(rho.a) if t > 1]
    out = []
    for rest in _subsets(pool, 1):
        if not rest:
            continue
        lam2 = prod((Fraction(t, t + 1) for t in rest), start=Fraction(1))
        if rho.value / lam2 != Fraction(p - 1, p):
            continue
        Lam2 = prod(rest)
        if gcd(Lam2, p - 1) > 1:
            continue
        if Lam2 % p == 0:
            logger.warning(f"{rho}: p = {p} divides Λ(α_2) = {Lam2}; subcase skipped as already covered")
            flags.append(CONSERVATIVE_DEDUP)
            continue
        degrees = tuple(sorted(_log2_exact(t + 1) for t in rest))
        two = tuple(Slot("poly", 2, d) for d in degrees)
        out.append(
            IsoClassDescriptor(two + (Slot("root-family", p, 2),), rho.value, mixed_is_maximal(degrees, "cyc", p, 2))
        )
        out.append(IsoClassDescriptor(two + (Slot("square", p),), rho.value, mixed_is_maximal(degrees, "sq", p, 2)))
    return out


def _nonprimary(rho: Rho, flags: list[str]) -> list[IsoClassDescriptor]:
    b = rho.b
    if b == 1:
        return []
    k = valuation(b, 2) if b % 2 == 0 else 0
    odd = b >> k
    if odd == 1:
        logger.info(f"{rho}: denominator is a power of two, solving for p^m")
        return _elementary_solutions(rho, None, 0)
    p, l = is_prime_power(odd)
    if l >= 2:
        logger.info(f"{rho}: odd part {p}^{l}, elementary Sylow {p}-part")
        return _elementary_solutions(rho, p, l)
    logger.info(f"{rho}: odd part {p}, elementary and cyclic Sylow {p}-parts")
    return _elementary_solutions(rho, p, 1) + _cyclic_solutions(rho, p, flags)


def _self_check(descriptors: list[IsoClassDescriptor]) -> None:
    bound = get_settings().self_check_order
    for desc in descriptors:
        spec = desc.first_instance(bound)
        if spec is None:
            continue
        lam = cycle_structure(evaluate(spec)).lam
        if lam != desc.lam:
            raise ClassificationError(f"{spec.render()} has λ = {lam}, expected {desc.lam}")


@lru_cache(maxsize=512)
def _classify(a: int, b: int, self_check: bool) -> ClassificationResult:
    rho = Rho(a, b)
    odd_primes = [p for p in factor(b).primes if p != 2]
    if len(odd_primes) >= 2:
        return ClassificationResult(rho=rho, descriptors=(), empty_reason=EMPTY_TWO_ODD_PRIMES)
    flags: list[str] = []
    found = _primary(rho) + _nonprimary(rho, flags)
    if rho.value == HALF:
        found += _nonabelian_families()
    unique: dict[tuple, IsoClassDescriptor] = {}
    for desc in found:
        key = (desc.template, desc.side_conditions)
        if key in unique:
            logger.info(f"{rho}: dropping repeated descriptor {desc.template}")
            continue
        unique[key] = desc
    descriptors = sorted(unique.values(), key=IsoClassDescriptor.sort_key)
    if self_check:
        _self_check(descriptors)
    logger.info(f"{rho}: {len(descriptors)} descriptors")
    return ClassificationResult(
        rho=rho,
        descriptors=tuple(descriptors),
        empty_reason=None if descriptors else EMPTY_NO_SOLUTION,
        flags=tuple(sorted(set(flags))),
    )


def classify_rho(rho: Rho | Fraction | str, self_check: bool | None = None) -> ClassificationResult:
    """All periodic FDG isomorphism classes with λ = ρ, as descriptors."""
    r = as_rho(rho)
    check = get_settings().self_check if self_check is None else self_check
    return _classify(r.a, r.b, check)


@dataclass(frozen=True)
class GroupDescriptor:
    group: str
    infinite: bool
    template: str
    side_conditions: tuple[str, ...] = field(default=())


def classify_group_lambda(rho: Rho | Fraction | str) -> list[GroupDescriptor]:
    """Groups G with λ(G) = ρ: underlying groups of the λ-maximal descriptors."""
    result = classify_rho(rho)
    out: dict[str, GroupDescriptor] = {}
    for desc in result.descriptors:
        if not desc.lambda_maximal:
            continue
        label = desc.group_label
        if label not in out:
            conds = tuple(c for s in desc.slots if not s.is_finite for c in s.conditions)
            out[label] = GroupDescriptor(group=label, infinite=desc.kind == "family", template=desc.template, side_conditions=conds)
    return list(out.values())


# --- affine maps with a single cycle -----------------------------------------------------

@dataclass(frozen=True)
class FullCycleAffine:
    group: str
    kind: str
    multipliers: tuple[int, ...]
    modulus: int
    klein_maps: int
    count: int
    conditions: tuple[str, ...]


def affine_full_cycle_classify(G) -> FullCycleAffine | None:
    """Periodic affine maps with λ = 1: G cyclic, or (Z/2)^2 x Z/odd."""
    H = as_group_type(G)
    two = H.part(2)
    klein = two is not None and two.exponents == (1, 1)
    if not (H.is_cyclic or klein):
        return None
    n = 1
    for P in H.parts:
        if not (klein and P.p == 2):
            n *= P.order
    mults = tuple(a for a in range(n) if gcd(a, n) == 1 or n == 1)
    mults = tuple(a for a in mults if all((a - 1) % p == 0 for p in factor(n).primes))
    conds = ["a ≡ 1 mod p for every prime p dividing the cyclic order"]
    if n % 4 == 0:
        mults = tuple(a for a in mults if (a - 1) % 4 == 0)
        conds.append("a ≡ 1 mod 4 when 4 divides the cyclic order")
    conds.append("translation generates the cyclic part")
    klein_maps = 1
    if klein:
        # three involutions of (Z/2)^2, two non-fixed translations each
        klein_maps = 6
        conds.append("(Z/2)^2 part: involution with a translation outside its fixed line")
    count = len(mults) * euler_phi(n) * klein_maps
    return FullCycleAffine(
        group=H.label,
        kind="klein" if klein else "cyclic",
        multipliers=mults,
        modulus=n,
        klein_maps=klein_maps,
        count=count,
        conditions=tuple(conds),
    )
