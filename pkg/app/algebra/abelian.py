"""
Finite abelian groups, their endomorphism matrices and cycle statistics.

An abelian p-group H_p = Z/p^e_1 x ... x Z/p^e_n (e nondecreasing) has its
elements as coordinate tuples. An integer matrix A acts on column vectors,
y_i = sum_j a_ij x_j mod p^e_i, and represents an endomorphism exactly when
p^(e_i - e_j) divides a_ij for all j <= i; it is an automorphism when in
addition p does not divide det(A).

Everything returned as a λ-value is a `fractions.Fraction`.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Any, Callable, Iterable, Iterator, Sequence

from sympy import isprime

from app.algebra.linalg import Matrix, as_matrix, det_bareiss, mat_mul, mat_vec, reduce_rows
from app.algebra.numtheory import factor, lcm_all
from app.config import get_settings
from app.errors import CapacityError, DomainError, NonPeriodicError

logger = logging.getLogger(__name__)


# --- generic finite groups and cycle structures ---------------------------

@dataclass(eq=False)
class FiniteGroup:
    """An explicitly enumerated group; elements are hashable normal forms."""

    name: str
    elements: tuple
    op: Callable[[Any, Any], Any]
    inv: Callable[[Any], Any]
    identity: Any
    abelian: bool = False
    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self._index = {x: i for i, x in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, x) -> int:
        return self._index[x]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@dataclass(frozen=True)
class CycleStructure:
    """Multiset of cycle lengths as (length, count) pairs, ascending."""

    counts: tuple[tuple[int, int], ...]

    @classmethod
    def from_lengths(cls, lengths: Iterable[int]) -> CycleStructure:
        acc: dict[int, int] = {}
        for n in lengths:
            acc[n] = acc.get(n, 0) + 1
        return cls(tuple(sorted(acc.items())))

    @classmethod
    def trivial(cls) -> CycleStructure:
        return cls(((1, 1),))

    @property
    def size(self) -> int:
        return sum(n * c for n, c in self.counts)

    @property
    def Lambda(self) -> int:
        return max(n for n, _ in self.counts)

    @property
    def lam(self) -> Fraction:
        return Fraction(self.Lambda, self.size)

    @property
    def order(self) -> int:
        return lcm_all(n for n, _ in self.counts)

    def join(self, other: CycleStructure) -> CycleStructure:
        """Cycle structure of the product map on the product set."""
        acc: dict[int, int] = {}
        for a, ca in self.counts:
            for b, cb in other.counts:
                g = gcd(a, b)
                length = a // g * b
                acc[length] = acc.get(length, 0) + ca * cb * g
        return CycleStructure(tuple(sorted(acc.items())))

    def __str__(self) -> str:
        return " ".join(f"{n}^{c}" for n, c in self.counts)


def _image_of(obj) -> list[int]:
    if hasattr(obj, "image_array"):
        return list(obj.image_array())
    return list(obj)


def cycles_of(image: Sequence[int]) -> list[list[int]]:
    """Cycles of a permutation given as an index array (raises if not bijective)."""
    n = len(image)
    hit = bytearray(n)
    for j in image:
        if hit[j]:
            raise NonPeriodicError("map is not a bijection")
        hit[j] = 1
    seen = bytearray(n)
    out = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = 1
            cyc.append(x)
            x = image[x]
        out.append(cyc)
    return out


def cycle_structure(obj) -> CycleStructure:
    """Exact cycle decomposition by marked orbit traversal."""
    image = _image_of(obj)
    if not image:
        raise DomainError("empty domain")
    return CycleStructure.from_lengths(len(c) for c in cycles_of(image))


def lambda_of(obj) -> Fraction:
    return cycle_structure(obj).lam


# --- abelian p-groups -----------------------------------------------------

@lru_cache(maxsize=256)
def coordinate_group(mods: tuple[int, ...], name: str) -> FiniteGroup:
    elements = tuple(itertools.product(*(range(m) for m in mods)))

    def op(a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, mods))

    def inv(a):
        return tuple(-x % m for x, m in zip(a, mods))

    return FiniteGroup(
        name=name,
        elements=elements,
        op=op,
        inv=inv,
        identity=tuple(0 for _ in mods),
        abelian=True,
    )


def _label(factors: Sequence[int]) -> str:
    if not factors:
        return "1"
    parts = []
    for m, run in itertools.groupby(factors):
        k = len(list(run))
        parts.append(f"Z{m}" if k == 1 else f"Z{m}^{k}")
    return " x ".join(parts)


@dataclass(frozen=True)
class AbelianPGroup:
    p: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))
        if not isprime(self.p):
            raise DomainError(f"{self.p} is not prime")
        if not self.exponents:
            raise DomainError("an abelian p-group needs at least one cyclic factor")
        if any(e < 1 for e in self.exponents):
            raise DomainError(f"exponents must be positive, got {self.exponents}")
        if list(self.exponents) != sorted(self.exponents):
            raise DomainError(f"exponents must be nondecreasing, got {self.exponents}")

    @property
    def rank(self) -> int:
        return len(self.exponents)

    @property
    def mods(self) -> tuple[int, ...]:
        return tuple(self.p**e for e in self.exponents)

    @property
    def order(self) -> int:
        return self.p ** sum(self.exponents)

    @property
    def is_cyclic(self) -> bool:
        return self.rank == 1

    @property
    def is_elementary(self) -> bool:
        return all(e == 1 for e in self.exponents)

    @property
    def label(self) -> str:
        return _label(self.mods)

    def check_orbit_capacity(self, capacity: int | None = None) -> None:
        bound = get_settings().orbit_capacity if capacity is None else capacity
        if self.order > bound:
            raise CapacityError(f"orbit traversal on {self.label}", self.order, bound)

    def as_group(self) -> FiniteGroup:
        self.check_orbit_capacity()
        return coordinate_group(self.mods, self.label)

    def elements(self) -> tuple:
        return self.as_group().elements

    def add(self, a, b) -> tuple[int, ...]:
        return tuple((x + y) % m for x, y, m in zip(a, b, self.mods))

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class AbelianGroupType:
    """Sylow decomposition of a finite abelian group, parts sorted by prime."""

    parts: tuple[AbelianPGroup, ...] = ()

    def __post_init__(self):
        primes = [P.p for P in self.parts]
        if len(set(primes)) != len(primes):
            raise DomainError(f"repeated prime among Sylow parts: {primes}")
        object.__setattr__(self, "parts", tuple(sorted(self.parts, key=lambda P: P.p)))

    @classmethod
    def parse(cls, text: str) -> AbelianGroupType:
        return parse_group(text)

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int]) -> AbelianGroupType:
        per_prime: dict[int, list[int]] = {}
        for n in orders:
            if n < 1:
                raise DomainError(f"cyclic factor order must be positive, got {n}")
            for p, e in factor(n):
                per_prime.setdefault(p, []).append(e)
        return cls(tuple(AbelianPGroup(p, tuple(sorted(es))) for p, es in per_prime.items()))

    @property
    def order(self) -> int:
        out = 1
        for P in self.parts:
            out *= P.order
        return out

    @property
    def primes(self) -> list[int]:
        return [P.p for P in self.parts]

    @property
    def mods(self) -> tuple[int, ...]:
        return tuple(m for P in self.parts for m in P.mods)

    @property
    def is_cyclic(self) -> bool:
        return all(P.is_cyclic for P in self.parts)

    def part(self, p: int) -> AbelianPGroup | None:
        return next((P for P in self.parts if P.p == p), None)

    @property
    def label(self) -> str:
        return _label(self.mods)

    def as_group(self) -> FiniteGroup:
        bound = get_settings().orbit_capacity
        if self.order > bound:
            raise CapacityError(f"orbit traversal on {self.label}", self.order, bound)
        return coordinate_group(self.mods, self.label)

    def __str__(self) -> str:
        return self.label


_FACTOR = re.compile(r"^\(?\s*(?:Z|C)\s*/?\s*(\d+)\s*(?:Z)?\s*\)?\s*(?:\^\s*(\d+))?$", re.IGNORECASE)


def parse_group(text: str) -> AbelianGroupType:
    """Parse "Z2^2 x Z4 x Z9" (also "(Z/2)^2", "C4", "×" or "*" separators, "1")."""
    body = text.strip()
    if body in ("", "1", "trivial"):
        return AbelianGroupType(())
    orders: list[int] = []
    for chunk in re.split(r"(?<=[\d)])\s*[xX×*]\s*(?=[ZzCc(])", body):
        m = _FACTOR.match(chunk.strip())
        if not m:
            raise DomainError(f"cannot parse group factor {chunk!r} in {text!r}")
        n = int(m.group(1))
        k = int(m.group(2)) if m.group(2) else 1
        orders.extend([n] * k)
    return AbelianGroupType.from_cyclic_orders(o for o in orders if o > 1)


def as_group_type(G: AbelianGroupType | AbelianPGroup | str) -> AbelianGroupType:
    if isinstance(G, str):
        return parse_group(G)
    if isinstance(G, AbelianPGroup):
        return AbelianGroupType((G,))
    return G


# --- endomorphism matrices ------------------------------------------------

def is_endo(matrix: Sequence[Sequence[int]], G: AbelianPGroup) -> bool:
    A = as_matrix(matrix)
    if len(A) != G.rank:
        raise DomainError(f"matrix size {len(A)} does not match rank {G.rank}")
    e = G.exponents
    for i in range(G.rank):
        for j in range(i + 1):
            if A[i][j] % G.p ** (e[i] - e[j]):
                return False
    return True


def is_auto(matrix: Sequence[Sequence[int]], G: AbelianPGroup) -> bool:
    return is_endo(matrix, G) and det_bareiss(as_matrix(matrix)) % G.p != 0


@dataclass(frozen=True)
class EndoMatrix:
    group: AbelianPGroup
    entries: Matrix

    def __post_init__(self):
        A = as_matrix(self.entries)
        if len(A) != self.group.rank:
            raise DomainError(f"matrix size {len(A)} does not match rank {self.group.rank}")
        object.__setattr__(self, "entries", reduce_rows(A, self.group.mods))

    @classmethod
    def identity(cls, G: AbelianPGroup) -> EndoMatrix:
        return cls(G, tuple(tuple(int(i == j) for j in range(G.rank)) for i in range(G.rank)))

    @property
    def is_endo(self) -> bool:
        return is_endo(self.entries, self.group)

    @property
    def is_auto(self) -> bool:
        return is_auto(self.entries, self.group)

    def det(self) -> int:
        return det_bareiss(self.entries)

    def apply(self, x: Sequence[int]) -> tuple[int, ...]:
        return mat_vec(self.entries, x, self.group.mods)

    __call__ = apply

    def compose(self, other: EndoMatrix) -> EndoMatrix:
        """self after other."""
        return EndoMatrix(self.group, mat_mul(self.entries, other.entries, self.group.mods))

    def power(self, k: int) -> EndoMatrix:
        out = EndoMatrix.identity(self.group)
        base = self
        while k:
            if k & 1:
                out = out.compose(base)
            base = base.compose(base)
            k >>= 1
        return out

    def image_array(self) -> list[int]:
        if not self.is_endo:
            raise DomainError(f"{self.entries} does not represent an endomorphism of {self.group}")
        grp = self.group.as_group()
        return [grp.index(self.apply(x)) for x in grp.elements]

    def order(self) -> int:
        return cycle_structure(self).order


@dataclass(frozen=True)
class AffineMap:
    """g ↦ translation + endo(g)."""

    translation: tuple[int, ...]
    endo: EndoMatrix

    def __post_init__(self):
        t = tuple(int(v) % m for v, m in zip(self.translation, self.endo.group.mods))
        if len(t) != self.endo.group.rank:
            raise DomainError("translation length does not match the group rank")
        object.__setattr__(self, "translation", t)

    @property
    def group(self) -> AbelianPGroup:
        return self.endo.group

    @property
    def is_periodic(self) -> bool:
        return self.endo.is_auto

    def apply(self, x: Sequence[int]) -> tuple[int, ...]:
        return self.group.add(self.translation, self.endo.apply(x))

    __call__ = apply

    def image_array(self) -> list[int]:
        grp = self.group.as_group()
        return [grp.index(self.apply(x)) for x in grp.elements]


def aut_count(G: AbelianPGroup) -> int:
    """Closed-form |Aut(G)| for G = prod Z/p^e_i."""
    p, e, n = G.p, G.exponents, G.rank
    d = [max(l for l in range(n) if e[l] == e[k]) + 1 for k in range(n)]
    c = [min(l for l in range(n) if e[l] == e[k]) + 1 for k in range(n)]
    out = 1
    for k in range(n):
        out *= p ** d[k] - p**k
    for j in range(n):
        out *= p ** (e[j] * (n - d[j]))
    for i in range(n):
        out *= p ** ((e[i] - 1) * (n - c[i] + 1))
    return out


def endo_candidate_count(G: AbelianPGroup) -> int:
    e = G.exponents
    return G.p ** sum(min(a, b) for a in e for b in e)


def enum_autos(G: AbelianPGroup, capacity: int | None = None) -> Iterator[EndoMatrix]:
    """Every automorphism of G exactly once, as a reduced Hillar-Rhea matrix."""
    bound = get_settings().aut_capacity if capacity is None else capacity
    count = endo_candidate_count(G)
    if count > bound:
        raise CapacityError(f"enum_autos({G.label})", count, bound)
    p, e, n = G.p, G.exponents, G.rank
    options = []
    for i in range(n):
        for j in range(n):
            step = p ** (e[i] - e[j]) if j <= i else 1
            options.append(range(0, p ** e[i], step))
    for flat in itertools.product(*options):
        rows = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))
        if det_bareiss(rows) % p:
            yield EndoMatrix(G, rows)


# --- λ of groups --------------------------------------------------------------

def sylow_structures(
    P: AbelianPGroup,
    affine: bool = False,
    transversal: bool | None = None,
) -> set[CycleStructure]:
    """Distinct cycle structures of all automorphisms (or periodic affine maps) of P."""
    use_transversal = get_settings().affine_transversal if transversal is None else transversal
    grp = P.as_group()
    out: set[CycleStructure] = set()
    for alpha in enum_autos(P):
        img = alpha.image_array()
        if not affine:
            out.add(cycle_structure(img))
            continue
        translations = _translation_transversal(grp, img) if use_transversal else range(grp.order)
        for t in translations:
            g0 = grp.elements[t]
            shifted = [grp.index(grp.op(g0, grp.elements[k])) for k in img]
            out.add(cycle_structure(shifted))
    return out


def _translation_transversal(grp: FiniteGroup, img: Sequence[int]) -> list[int]:
    """Coset representatives of {x - α(x)}; translations in one coset give conjugate maps."""
    image_of_one_minus = {
        grp.index(grp.op(x, grp.inv(grp.elements[img[i]]))) for i, x in enumerate(grp.elements)
    }
    seen: set[int] = set()
    reps = []
    for i, g in enumerate(grp.elements):
        if i in seen:
            continue
        reps.append(i)
        for s in image_of_one_minus:
            seen.add(grp.index(grp.op(g, grp.elements[s])))
    return reps


def best_join(per_part: Sequence[Iterable[CycleStructure]]) -> CycleStructure:
    """Largest-Λ product structure over one choice per Sylow part."""
    best = CycleStructure.trivial()
    for combo in itertools.product(*[sorted(s, key=lambda c: c.counts) for s in per_part]):
        cs = CycleStructure.trivial()
        for part in combo:
            cs = cs.join(part)
        if cs.Lambda > best.Lambda or best.size != cs.size:
            best = cs
    return best


def lambda_group(G: AbelianGroupType | AbelianPGroup | str) -> Fraction:
    """λ(G) = max over automorphisms, computed per Sylow part and joined."""
    H = as_group_type(G)
    logger.info(f"lambda_group: {H.label}")
    return best_join([sylow_structures(P) for P in H.parts]).lam


def Lambda_group(G: AbelianGroupType | AbelianPGroup | str) -> int:
    H = as_group_type(G)
    return best_join([sylow_structures(P) for P in H.parts]).Lambda


def lambda_aff_group(
    G: AbelianGroupType | AbelianPGroup | str,
    transversal: bool | None = None,
) -> Fraction:
    H = as_group_type(G)
    logger.info(f"lambda_aff_group: {H.label}")
    return best_join([sylow_structures(P, affine=True, transversal=transversal) for P in H.parts]).lam


# --- compatibility and characteristic subgroups ------------------------------

class Compatibility(str, Enum):
    DOWNWARD = "downward"
    UPWARD = "upward"
    BOTH = "both"
    NEITHER = "neither"


def compatibility(e: Sequence[int], f: Sequence[int]) -> Compatibility:
    if len(e) != len(f):
        raise DomainError(f"tuples of different lengths: {tuple(e)} vs {tuple(f)}")
    if list(e) != sorted(e) or list(f) != sorted(f):
        raise DomainError("both tuples must be nondecreasing")
    if any(b < 0 for b in f) or any(a < b for a, b in zip(e, f)):
        raise DomainError(f"need e_i >= f_i >= 0, got {tuple(e)} vs {tuple(f)}")
    d = [a - b for a, b in zip(e, f)]
    down = all(d[j] <= d[j + 1] for j in range(len(d) - 1))
    up = all(d[j] >= d[j + 1] for j in range(len(d) - 1))
    if down and up:
        return Compatibility.BOTH
    if down:
        return Compatibility.DOWNWARD
    if up:
        return Compatibility.UPWARD
    return Compatibility.NEITHER


def project_matrix(A: EndoMatrix, f: Sequence[int]) -> EndoMatrix | None:
    """The same integer matrix read on prod Z/p^f_i (zero exponents dropped)."""
    keep = [i for i, b in enumerate(f) if b > 0]
    if not keep:
        return None
    F = AbelianPGroup(A.group.p, tuple(f[i] for i in keep))
    rows = tuple(tuple(A.entries[i][j] for j in keep) for i in keep)
    return EndoMatrix(F, rows)


def omega_type(P: AbelianPGroup, k: int) -> AbelianPGroup | None:
    """Isomorphism type of Ω_k(P) = {x : p^k x = 0}."""
    es = tuple(sorted(min(e, k) for e in P.exponents if min(e, k) > 0))
    return AbelianPGroup(P.p, es) if es else None


def agemo_type(P: AbelianPGroup, k: int) -> AbelianPGroup | None:
    """Isomorphism type of ℧_k(P) = p^k P (also of P/Ω_k(P))."""
    es = tuple(sorted(e - k for e in P.exponents if e > k))
    return AbelianPGroup(P.p, es) if es else None


def omega_subgroup(P: AbelianPGroup, k: int) -> list[tuple[int, ...]]:
    q = P.p**k
    return [x for x in P.elements() if all(q * v % m == 0 for v, m in zip(x, P.mods))]


def agemo_subgroup(P: AbelianPGroup, k: int) -> list[tuple[int, ...]]:
    q = P.p**k
    return sorted({tuple(q * v % m for v, m in zip(x, P.mods)) for x in P.elements()})


def mao(P: AbelianPGroup) -> int:
    """Maximum automorphism order, by enumeration."""
    return max(A.order() for A in enum_autos(P))


def mao_bound(p: int, n: int, e: int) -> int:
    """Upper bound p^(e-1)(p^n - 1) on mao((Z/p^e)^n)."""
    return p ** (e - 1) * (p**n - 1)


# --- inversion statistics -------------------------------------------------------

def _group_and_image(alpha, G: FiniteGroup | None = None) -> tuple[FiniteGroup, list[int]]:
    if isinstance(alpha, (EndoMatrix, AffineMap)):
        return alpha.group.as_group(), alpha.image_array()
    grp = G if G is not None else getattr(alpha, "group", None)
    if not isinstance(grp, FiniteGroup):
        raise DomainError("a FiniteGroup is needed to measure inversions")
    return grp, _image_of(alpha)


def _inverted_count(grp: FiniteGroup, image: Sequence[int]) -> int:
    return sum(1 for i, x in enumerate(grp.elements) if image[i] == grp.index(grp.inv(x)))


def inversion_fraction(alpha, G: FiniteGroup | None = None) -> Fraction:
    """l(α): share of elements g with α(g) = g⁻¹."""
    grp, image = _group_and_image(alpha, G)
    return Fraction(_inverted_count(grp, image), grp.order)


def l_group(G, automorphisms: Iterable | None = None) -> Fraction:
    """l(G) = max over automorphisms of l(α); 1 for abelian groups."""
    if isinstance(G, (AbelianGroupType, AbelianPGroup, str)):
        return Fraction(1)
    if G.abelian:
        return Fraction(1)
    if automorphisms is None:
        from app.algebra.fdg import enum_group_automorphisms

        automorphisms = enum_group_automorphisms(G)
    return max(inversion_fraction(a, G) for a in automorphisms)


def compose_image(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Index array of a after b."""
    return [a[j] for j in b]


def quotient_image(grp: FiniteGroup, image: Sequence[int], subgroup: Iterable) -> tuple[list[int], list[int]]:
    """Induced permutation on left cosets xN; returns (coset id per element, coset image)."""
    members = [grp.index(n) for n in subgroup]
    coset_of = [-1] * grp.order
    reps: list[int] = []
    for i, x in enumerate(grp.elements):
        if coset_of[i] >= 0:
            continue
        cid = len(reps)
        reps.append(i)
        for j in members:
            coset_of[grp.index(grp.op(x, grp.elements[j]))] = cid
    induced = [-1] * len(reps)
    for cid, r in enumerate(reps):
        induced[cid] = coset_of[image[r]]
    # admissibility: every element of a coset lands in the same coset
    for i in range(grp.order):
        if coset_of[image[i]] != induced[coset_of[i]]:
            raise DomainError("subgroup is not admissible for this map")
    return coset_of, induced


@dataclass(frozen=True)
class InversionCheck:
    lam: Fraction
    quotient_lam: Fraction
    best_power: int
    inverted_fraction: Fraction
    holds: bool


def inversion_lemma_check(alpha, subgroup: Iterable | None = None, G: FiniteGroup | None = None) -> InversionCheck:
    """Some power of α inverts more than λ(α on G/N) of G, for central proper N."""
    grp, image = _group_and_image(alpha, G)
    lam = lambda_of(image)
    sub = [grp.identity] if subgroup is None else list(subgroup)
    if len(sub) >= grp.order:
        raise DomainError("subgroup must be proper")
    _, induced = quotient_image(grp, image, sub)
    qlam = lambda_of(induced)
    best, best_k = 0, 1
    power = list(image)
    for k in range(1, cycle_structure(image).order + 1):
        c = _inverted_count(grp, power)
        if c > best:
            best, best_k = c, k
        power = compose_image(image, power)
    frac = Fraction(best, grp.order)
    return InversionCheck(lam=lam, quotient_lam=qlam, best_power=best_k, inverted_fraction=frac, holds=frac > qlam)
