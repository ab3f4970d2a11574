"""
Finite dynamical groups (FDGs): symbolic constructors, evaluation to concrete
maps, products, Frobenius decomposition and the structural checks built on
orbit traversal.

Spec text syntax (parsed by `parse_spec`, produced by `render`):

    M(7,3)                        multiplication by 3 on Z/7
    V(3,[[0,2],[1,1]])            a matrix acting on (Z/3)^2
    V(x^3+x+1@2)                  companion matrix of a polynomial over F_p
    E(Z2 x Z4,[[1,1],[2,1]])      Hillar-Rhea matrix on an abelian p-group
    E(Z2 x Z4,[[1,1],[2,1]],(1,0))  the same, twisted by a translation
    Dih(12,5) Dic(8,1) DK(9,4) DicK(9,4)
    V(x^2+x+1@2) * M(3,2)         direct product
"""

from __future__ import annotations

import itertools
import json
import logging
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Sequence

from app.algebra.abelian import (
    AbelianPGroup,
    AffineMap,
    CycleStructure,
    EndoMatrix,
    FiniteGroup,
    compose_image,
    coordinate_group,
    cycle_structure,
    cycles_of,
    parse_group,
    quotient_image,
)
from app.algebra.ffpoly import FpPoly, companion, factor_poly, is_irreducible, is_primitive, parse_poly, poly_order
from app.algebra.linalg import Matrix, as_matrix, charpoly_mod_p, det_bareiss, mat_mul, nullity_mod_p, poly_at_matrix
from app.algebra.numtheory import divisors, euler_phi, factor, lcm_all, mult_order
from app.config import get_settings
from app.errors import CapacityError, DomainError, NonPeriodicError

logger = logging.getLogger(__name__)


# --- concrete maps ------------------------------------------------------------

@dataclass(eq=False)
class FiniteMap:
    """A total self-map of an enumerated group."""

    group: FiniteGroup
    step: Callable
    label: str = ""

    @property
    def elements(self) -> tuple:
        return self.group.elements

    def image_array(self) -> list[int]:
        grp = self.group
        return [grp.index(self.step(x)) for x in grp.elements]

    @property
    def is_periodic(self) -> bool:
        image = self.image_array()
        return len(set(image)) == len(image)


def _check_order(order: int, what: str) -> None:
    bound = get_settings().orbit_capacity
    if order > bound:
        raise CapacityError(f"evaluate {what}", order, bound)


# --- dihedral-type normal forms -----------------------------------------------

def _dihedral_group(n: int, dicyclic: bool) -> FiniteGroup:
    # (k, s) stands for r^k x^s
    half = n // 2 if dicyclic else 0

    def op(a, b):
        k, s = a
        l, t = b
        e = k + (l if s == 0 else -l)
        if s and t:
            e += half
        return (e % n, (s + t) % 2)

    def inv(a):
        k, s = a
        if s == 0:
            return (-k % n, 0)
        # (r^k x)^-1 = r^(k + half) x
        return ((k + half) % n, 1)

    name = f"Dic{2 * n}" if dicyclic else f"D{2 * n}"
    elements = tuple((k, s) for s in (0, 1) for k in range(n))
    return FiniteGroup(name=name, elements=elements, op=op, inv=inv, identity=(0, 0))


def _klein_group(o: int, dicyclic: bool) -> FiniteGroup:
    # (a1, a2, k, s) stands for r1^a1 r2^a2 r^k x^s, with x^2 = r1 r2 in the dicyclic case
    sq = 1 if dicyclic else 0

    def op(a, b):
        a1, a2, k, s = a
        b1, b2, l, t = b
        c1, c2 = a1 + b1, a2 + b2
        if s and t:
            c1 += sq
            c2 += sq
        return (c1 % 2, c2 % 2, (k + (l if s == 0 else -l)) % o, (s + t) % 2)

    def inv(a):
        a1, a2, k, s = a
        if s == 0:
            return (a1, a2, -k % o, 0)
        return ((a1 + sq) % 2, (a2 + sq) % 2, k, 1)

    name = f"Dic(Z2^2 x Z{o})" if dicyclic else f"D(Z2^2 x Z{o})"
    elements = tuple(itertools.product(range(2), range(2), range(o), range(2)))
    return FiniteGroup(name=name, elements=elements, op=op, inv=inv, identity=(0, 0, 0, 0))


def valid_multiplier(kind: str, n: int, m: int) -> bool:
    """m ≡ 1 mod every prime dividing n, and m ≡ 1 mod 4 when 4 | n (dihedral kinds)."""
    if any((m - 1) % p for p in factor(n).primes):
        return False
    if kind in ("Dih", "Dic") and n % 4 == 0 and (m - 1) % 4:
        return False
    return True


def family_m_values(kind: str, n: int) -> list[int]:
    """Admissible multipliers m in Z_n for the four nonabelian λ = 1/2 families."""
    _check_family(kind, n)
    return [m for m in range(n) if valid_multiplier(kind, n, m)]


def family_m_count(kind: str, n: int) -> int:
    rad = 1
    for p in factor(n).primes:
        rad *= p
    extra = 2 if kind in ("Dih", "Dic") and n % 4 == 0 else 1
    return n // (rad * extra)


def _check_family(kind: str, n: int) -> None:
    if kind == "Dih" and n < 3:
        raise DomainError(f"Dih(n, m) needs n >= 3, got {n}")
    if kind == "Dic" and (n < 4 or n % 2):
        raise DomainError(f"Dic(n, m) needs even n >= 4, got {n}")
    if kind in ("DK", "DicK") and (n < 3 or n % 2 == 0):
        raise DomainError(f"{kind}(o, m) needs odd o >= 3, got {n}")
    if kind not in ("Dih", "Dic", "DK", "DicK"):
        raise DomainError(f"unknown family {kind!r}")


# --- symbolic specs -------------------------------------------------------------

class FdgSpec:
    """Base of the symbolic FDG constructors."""

    @property
    def order(self) -> int:
        raise NotImplementedError

    def render(self) -> str:
        raise NotImplementedError

    def to_map(self) -> FiniteMap:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Mult(FdgSpec):
    """M(m, a): y ↦ a·y on Z/m."""

    m: int
    a: int

    def __post_init__(self):
        if self.m < 1:
            raise DomainError(f"M(m, a) needs m >= 1, got {self.m}")
        object.__setattr__(self, "a", self.a % self.m)

    @property
    def order(self) -> int:
        return self.m

    def render(self) -> str:
        return f"M({self.m},{self.a})"

    def to_map(self) -> FiniteMap:
        m, a = self.m, self.a
        return FiniteMap(coordinate_group((m,), f"Z{m}"), lambda y: (a * y[0] % m,), self.render())


@dataclass(frozen=True)
class MatrixVec(FdgSpec):
    """V(m, A): y ↦ A·y on (Z/m)^n."""

    m: int
    matrix: Matrix

    def __post_init__(self):
        if self.m < 2:
            raise DomainError(f"V(m, A) needs m >= 2, got {self.m}")
        A = as_matrix(self.matrix)
        if not A:
            raise DomainError("V(m, A) needs a nonempty matrix")
        object.__setattr__(self, "matrix", tuple(tuple(v % self.m for v in row) for row in A))

    @property
    def order(self) -> int:
        return self.m ** len(self.matrix)

    def render(self) -> str:
        rows = ",".join("[" + ",".join(str(v) for v in row) + "]" for row in self.matrix)
        return f"V({self.m},[{rows}])"

    def to_map(self) -> FiniteMap:
        n, m, A = len(self.matrix), self.m, self.matrix
        mods = (m,) * n

        def step(y):
            return tuple(sum(a * v for a, v in zip(row, y)) % m for row in A)

        return FiniteMap(coordinate_group(mods, f"Z{m}^{n}"), step, self.render())


@dataclass(frozen=True)
class PolyVec(FdgSpec):
    """V(P(X)): the companion matrix of P acting on F_p^deg P."""

    poly: FpPoly

    def __post_init__(self):
        companion(self.poly)

    @property
    def order(self) -> int:
        return self.poly.p ** self.poly.degree

    def render(self) -> str:
        return f"V({self.poly.label()})"

    def as_matrix_vec(self) -> MatrixVec:
        return MatrixVec(self.poly.p, companion(self.poly).rows)

    def to_map(self) -> FiniteMap:
        fm = self.as_matrix_vec().to_map()
        fm.label = self.render()
        return fm


@dataclass(frozen=True)
class GenericAbelian(FdgSpec):
    """A Hillar-Rhea matrix (optionally with a translation) on an abelian p-group."""

    group: AbelianPGroup
    matrix: Matrix
    translation: tuple[int, ...] | None = None

    def __post_init__(self):
        endo = EndoMatrix(self.group, self.matrix)
        if not endo.is_endo:
            raise DomainError(f"{self.matrix} is not an endomorphism of {self.group}")
        object.__setattr__(self, "matrix", endo.entries)

    @property
    def endo(self) -> EndoMatrix:
        return EndoMatrix(self.group, self.matrix)

    @property
    def as_map(self) -> EndoMatrix | AffineMap:
        if self.translation is None:
            return self.endo
        return AffineMap(self.translation, self.endo)

    @property
    def order(self) -> int:
        return self.group.order

    def render(self) -> str:
        rows = ",".join("[" + ",".join(str(v) for v in row) + "]" for row in self.matrix)
        out = f"E({self.group.label},[{rows}]"
        if self.translation is not None:
            out += ",(" + ",".join(str(v) for v in self.translation) + ")"
        return out + ")"

    def to_map(self) -> FiniteMap:
        return FiniteMap(self.group.as_group(), self.as_map.apply, self.render())


@dataclass(frozen=True)
class Dihedral(FdgSpec):
    """D_2n with r ↦ r^m, x ↦ xr."""

    n: int
    m: int

    kind = "Dih"
    dicyclic = False

    def __post_init__(self):
        _check_family(self.kind, self.n)
        object.__setattr__(self, "m", self.m % self.n)

    @property
    def order(self) -> int:
        return 2 * self.n

    @property
    def is_periodic(self) -> bool:
        return gcd(self.m, self.n) == 1

    def render(self) -> str:
        return f"{self.kind}({self.n},{self.m})"

    def group(self) -> FiniteGroup:
        return _dihedral_group(self.n, self.dicyclic)

    def to_map(self) -> FiniteMap:
        n, m = self.n, self.m

        def step(g):
            k, s = g
            return ((m * k) % n, 0) if s == 0 else ((m * k - 1) % n, 1)

        return FiniteMap(self.group(), step, self.render())


@dataclass(frozen=True)
class Dicyclic(Dihedral):
    kind = "Dic"
    dicyclic = True


@dataclass(frozen=True)
class DKlein(FdgSpec):
    """D((Z/2)^2 x Z/o) with r1 ↔ r2, r ↦ r^m, x ↦ x r1 r."""

    o: int
    m: int

    kind = "DK"
    dicyclic = False

    def __post_init__(self):
        _check_family(self.kind, self.o)
        object.__setattr__(self, "m", self.m % self.o)

    @property
    def order(self) -> int:
        return 8 * self.o

    @property
    def is_periodic(self) -> bool:
        return gcd(self.m, self.o) == 1

    def render(self) -> str:
        return f"{self.kind}({self.o},{self.m})"

    def group(self) -> FiniteGroup:
        return _klein_group(self.o, self.dicyclic)

    def to_map(self) -> FiniteMap:
        o, m = self.o, self.m

        def step(g):
            a1, a2, k, s = g
            if s == 0:
                return (a2, a1, m * k % o, 0)
            return ((a2 + 1) % 2, a1, (m * k - 1) % o, 1)

        return FiniteMap(self.group(), step, self.render())


@dataclass(frozen=True)
class DicKlein(DKlein):
    kind = "DicK"
    dicyclic = True


@dataclass(frozen=True)
class Product(FdgSpec):
    factors: tuple[FdgSpec, ...] = ()

    def __post_init__(self):
        flat: list[FdgSpec] = []
        for f in self.factors:
            flat.extend(f.factors if isinstance(f, Product) else [f])
        object.__setattr__(self, "factors", tuple(flat))

    @property
    def order(self) -> int:
        out = 1
        for f in self.factors:
            out *= f.order
        return out

    def render(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f.render() for f in self.factors)

    def to_map(self) -> FiniteMap:
        maps = [f.to_map() for f in self.factors]
        groups = [fm.group for fm in maps]
        elements = tuple(itertools.product(*(g.elements for g in groups)))

        def op(a, b):
            return tuple(g.op(x, y) for g, x, y in zip(groups, a, b))

        def inv(a):
            return tuple(g.inv(x) for g, x in zip(groups, a))

        grp = FiniteGroup(
            name=" x ".join(g.name for g in groups) or "1",
            elements=elements,
            op=op,
            inv=inv,
            identity=tuple(g.identity for g in groups),
            abelian=all(g.abelian for g in groups),
        )
        return FiniteMap(grp, lambda x: tuple(fm.step(c) for fm, c in zip(maps, x)), self.render())


FAMILIES: dict[str, type] = {"Dih": Dihedral, "Dic": Dicyclic, "DK": DKlein, "DicK": DicKlein}


def product(specs: Iterable[FdgSpec]) -> FdgSpec:
    items = list(specs)
    if len(items) == 1:
        return items[0]
    return Product(tuple(items))


def evaluate(spec: FdgSpec) -> FiniteMap:
    """Concrete map on normal forms; capacity-checked on |G|."""
    _check_order(spec.order, spec.render())
    return spec.to_map()


# --- text syntax ----------------------------------------------------------------

def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if text.startswith(sep * 2, i):
            cur.append(sep * 2)
            i += 2 * len(sep)
            continue
        if depth == 0 and text.startswith(sep, i):
            parts.append("".join(cur))
            cur = []
            i += len(sep)
            continue
        cur.append(ch)
        i += 1
    parts.append("".join(cur))
    if depth != 0:
        raise DomainError(f"unbalanced brackets in {text!r}")
    return [p.strip() for p in parts]


_CALL = re.compile(r"^(\w+)\s*\((.*)\)$", re.DOTALL)


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise DomainError(f"expected integers, got {text!r}") from exc


def _parse_factor(text: str) -> FdgSpec:
    m = _CALL.match(text.strip())
    if not m:
        raise DomainError(f"cannot parse FDG factor {text!r}")
    head, body = m.group(1), m.group(2).strip()
    if head == "M":
        args = _ints(body)
        if len(args) != 2:
            raise DomainError(f"M expects two integers, got {text!r}")
        return Mult(*args)
    if head in FAMILIES:
        args = _ints(body)
        if len(args) != 2:
            raise DomainError(f"{head} expects two integers, got {text!r}")
        return FAMILIES[head](*args)
    if head == "V":
        args = _split_top(body, ",")
        if len(args) == 2 and args[1].startswith("["):
            return MatrixVec(int(args[0]), tuple(tuple(r) for r in json.loads(args[1])))
        return PolyVec(parse_poly(body))
    if head == "E":
        args = _split_top(body, ",")
        if len(args) not in (2, 3):
            raise DomainError(f"E expects a group, a matrix and an optional translation, got {text!r}")
        H = parse_group(args[0])
        if len(H.parts) != 1:
            raise DomainError(f"E needs an abelian p-group, got {args[0]!r}")
        matrix = tuple(tuple(r) for r in json.loads(args[1]))
        translation = tuple(_ints(args[2].strip("() "))) if len(args) == 3 else None
        return GenericAbelian(H.parts[0], matrix, translation)
    raise DomainError(f"unknown FDG constructor {head!r}")


def parse_spec(text: str) -> FdgSpec:
    """Parse an FDG expression such as "Dih(12,5) * M(7,3)"; "1" is the trivial FDG."""
    body = text.strip()
    if body in ("1", "trivial", ""):
        return Product(())
    return product(_parse_factor(chunk) for chunk in _split_top(body, "*"))


def render(spec: FdgSpec) -> str:
    return spec.render()


# --- cycle structures of specs ----------------------------------------------------

def mult_structure(m: int, a: int) -> CycleStructure:
    """Cycles of y ↦ a·y on Z/m, one orbit family per divisor d of m."""
    if gcd(a, m) != 1:
        raise NonPeriodicError(f"gcd({a}, {m}) != 1")
    lengths: dict[int, int] = {}
    for d in divisors(m):
        k = mult_order(a, d)
        lengths[k] = lengths.get(k, 0) + euler_phi(d) // k
    return CycleStructure(tuple(sorted(lengths.items())))


def spec_structure(spec: FdgSpec) -> CycleStructure:
    """Cycle structure, composed factor-wise so products are never materialized."""
    if isinstance(spec, Product):
        out = CycleStructure.trivial()
        for f in spec.factors:
            out = out.join(spec_structure(f))
        return out
    if isinstance(spec, Mult):
        return mult_structure(spec.m, spec.a)
    if isinstance(spec, PolyVec) and spec.poly.coeffs[0] and is_irreducible(spec.poly):
        o = poly_order(spec.poly)
        return CycleStructure(((1, 1), (o, (spec.order - 1) // o))) if o > 1 else CycleStructure(((1, spec.order),))
    return cycle_structure(evaluate(spec))


def lambda_of_spec(spec: FdgSpec) -> Fraction:
    return spec_structure(spec).lam


def Lambda_of_spec(spec: FdgSpec) -> int:
    return spec_structure(spec).Lambda


@dataclass(frozen=True)
class ProductLambda:
    value: Fraction | None
    coprime: bool
    bound: Fraction | None = None


def lambda_product(items: Sequence[CycleStructure | tuple[Fraction, int]]) -> ProductLambda:
    """λ of a product: ∏λ_i when the Λ_i are pairwise coprime, else exact join or the ½∏λ bound."""
    lams, Lams = [], []
    for it in items:
        if isinstance(it, CycleStructure):
            lams.append(it.lam)
            Lams.append(it.Lambda)
        else:
            lams.append(Fraction(it[0]))
            Lams.append(int(it[1]))
    coprime = all(gcd(a, b) == 1 for a, b in itertools.combinations(Lams, 2))
    prod = Fraction(1)
    for v in lams:
        prod *= v
    if coprime:
        return ProductLambda(value=prod, coprime=True)
    if all(isinstance(it, CycleStructure) for it in items):
        out = CycleStructure.trivial()
        for it in items:
            out = out.join(it)
        return ProductLambda(value=out.lam, coprime=False, bound=prod / 2)
    return ProductLambda(value=None, coprime=False, bound=prod / 2)


# --- Frobenius decomposition ------------------------------------------------------

def frobenius_decompose(A: Sequence[Sequence[int]], p: int) -> list[tuple[FpPoly, int]]:
    """Primary Frobenius blocks (P, k) of an invertible matrix over F_p, canonically sorted."""
    M = tuple(tuple(v % p for v in row) for row in as_matrix(A))
    n = len(M)
    if n == 0:
        return []
    if det_bareiss(M) % p == 0:
        raise DomainError("matrix is singular over F_p")
    mods = [p] * n
    blocks: list[tuple[FpPoly, int]] = []
    for P, mult in factor_poly(charpoly_mod_p(M, p)):
        d = P.degree
        base = poly_at_matrix(P, M)
        kernel = [0]
        power = base
        for _ in range(mult):
            kernel.append(nullity_mod_p(power, p))
            power = mat_mul(power, base, mods)
        kernel.append(kernel[-1])
        for j in range(1, mult + 1):
            at_least_j = (kernel[j] - kernel[j - 1]) // d
            at_least_next = (kernel[j + 1] - kernel[j]) // d
            blocks.extend([(P, j)] * (at_least_j - at_least_next))
    if sum(P.degree * k for P, k in blocks) != n:
        raise DomainError("block sizes do not add up to the matrix size")
    return sorted(blocks, key=lambda b: (b[0].sort_key(), b[1]))


def matrix_order(A: Sequence[Sequence[int]], p: int) -> int:
    """lcm of the orders of the primary block polynomials."""
    return lcm_all(poly_order(P**k) for P, k in frobenius_decompose(A, p))


@dataclass(frozen=True)
class FrobeniusType:
    degrees: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(sorted(self.degrees)))

    def __str__(self) -> str:
        return "(" + ",".join(str(d) for d in self.degrees) + ")"


def frobenius_type(blocks: Sequence[tuple[FpPoly, int]]) -> FrobeniusType | None:
    """Frobenius type when every block is a distinct primitive polynomial to the first power."""
    if any(k != 1 for _, k in blocks):
        return None
    polys = [P for P, _ in blocks]
    if len(set(polys)) != len(polys) or not all(is_primitive(P) for P in polys):
        return None
    return FrobeniusType(tuple(P.degree for P in polys))


# --- structural checks ----------------------------------------------------------

def _map_parts(A, G: FiniteGroup | None = None) -> tuple[FiniteGroup, list[int], list[int], object]:
    """(group, image of A, image of its automorphism part, translation g0)."""
    if isinstance(A, AffineMap):
        grp = A.group.as_group()
        return grp, A.image_array(), A.endo.image_array(), A.translation
    if isinstance(A, EndoMatrix):
        grp = A.group.as_group()
        img = A.image_array()
        return grp, img, img, grp.identity
    if isinstance(A, FiniteMap):
        img = A.image_array()
        return A.group, img, img, A.group.identity
    if G is None:
        raise DomainError("a FiniteGroup is needed for a bare image array")
    img = list(A)
    return G, img, img, G.identity


@dataclass(frozen=True)
class TransferCheck:
    L: int
    l: int
    Lambda: int
    quotient_order: int
    subgroup_order: int
    verified: bool


def transfer_check(A, N: Iterable, G: FiniteGroup | None = None) -> TransferCheck:
    """Split a largest cycle of A over an admissible normal subgroup N."""
    grp, image, alpha, g0 = _map_parts(A, G)
    sub = list(N)
    members = {grp.index(n) for n in sub}
    coset_of, induced = quotient_image(grp, image, sub)
    cycles = cycles_of(image)
    longest = max(cycles, key=len)
    Lam = len(longest)
    x = longest[0]
    L = 1
    y = image[x]
    while coset_of[y] != coset_of[x]:
        y = image[y]
        L += 1
    l = Lam // L
    # n0 = x^-1 A^L(x); then follow h ↦ n0·α^L(h) from the identity inside N
    n0 = grp.op(grp.inv(grp.elements[x]), grp.elements[y])
    alpha_L = list(range(grp.order))
    for _ in range(L):
        alpha_L = compose_image(alpha, alpha_L)
    ident = grp.index(grp.identity)
    h = grp.index(grp.op(n0, grp.elements[alpha_L[ident]]))
    inner = 1
    while h != ident:
        if h not in members:
            raise DomainError("subgroup is not admissible for this map")
        h = grp.index(grp.op(n0, grp.elements[alpha_L[h]]))
        inner += 1
    quotient_cycle = next(len(c) for c in cycles_of(induced) if coset_of[x] in c)
    q_order = len(induced)
    verified = (
        L * l == Lam
        and inner == l
        and quotient_cycle == L
        and Fraction(Lam, grp.order) == Fraction(L, q_order) * Fraction(l, len(sub))
    )
    return TransferCheck(L=L, l=l, Lambda=Lam, quotient_order=q_order, subgroup_order=len(sub), verified=verified)


def element_order(grp: FiniteGroup, g) -> int:
    k, x = 1, g
    while x != grp.identity:
        x = grp.op(x, g)
        k += 1
    return k


@dataclass(frozen=True)
class AffineOrderCheck:
    predicted: int
    actual: int
    equal: bool


def affine_order_check(g0, alpha, G: FiniteGroup | None = None) -> AffineOrderCheck:
    """ord(g ↦ g0·α(g)) against ord(f)·ord(α), f = g0 α(g0) ⋯ α^(ord α − 1)(g0)."""
    grp, alpha_img, _, _ = _map_parts(alpha, G)
    ord_alpha = cycle_structure(alpha_img).order
    f = grp.identity
    cur = g0
    for _ in range(ord_alpha):
        f = grp.op(f, cur)
        cur = grp.elements[alpha_img[grp.index(cur)]]
    predicted = element_order(grp, f) * ord_alpha
    affine = [grp.index(grp.op(g0, grp.elements[j])) for j in alpha_img]
    actual = cycle_structure(affine).order
    return AffineOrderCheck(predicted=predicted, actual=actual, equal=predicted == actual)


# --- automorphisms of small nonabelian groups -----------------------------------

def enum_group_automorphisms(
    G: FiniteGroup,
    generators: Sequence | None = None,
    candidates: Sequence[Sequence] | None = None,
    capacity: int | None = None,
) -> list[list[int]]:
    """Automorphisms as index arrays, found by extending generator images breadth-first."""
    gens = list(generators) if generators is not None else _default_generators(G)
    orders = {g: element_order(G, g) for g in G.elements}
    if candidates is None:
        candidates = [[h for h in G.elements if orders[h] == orders[g]] for g in gens]
    total = 1
    for c in candidates:
        total *= len(c)
    bound = get_settings().oracle_candidates if capacity is None else capacity
    if total > bound:
        raise CapacityError(f"automorphisms of {G.name}", total, bound)
    out = []
    for images in itertools.product(*candidates):
        img = _extend(G, gens, images)
        if img is not None:
            out.append(img)
    logger.info(f"{G.name}: {len(out)} automorphisms from {total} generator images")
    return out


def _extend(G: FiniteGroup, gens: Sequence, images: Sequence) -> list[int] | None:
    n = G.order
    phi: list[int] = [-1] * n
    start = G.index(G.identity)
    phi[start] = start
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        y = G.elements[phi[G.index(x)]]
        for g, h in zip(gens, images):
            xg = G.index(G.op(x, g))
            yh = G.index(G.op(y, h))
            if phi[xg] < 0:
                phi[xg] = yh
                queue.append(G.elements[xg])
            elif phi[xg] != yh:
                return None
    if -1 in phi or len(set(phi)) != n:
        return None
    return phi


def _default_generators(G: FiniteGroup) -> list:
    """A greedy generating set: add elements until their closure is everything."""
    gens: list = []
    closure = {G.identity}
    for g in sorted(G.elements, key=lambda e: -element_order(G, e)):
        if g in closure:
            continue
        gens.append(g)
        frontier = deque(closure)
        while frontier:
            x = frontier.popleft()
            for s in gens:
                y = G.op(x, s)
                if y not in closure:
                    closure.add(y)
                    frontier.append(y)
        if len(closure) == G.order:
            break
    return gens


def family_generators(spec: FdgSpec) -> tuple[list, list[list]]:
    """Generators of a nonabelian family group and their within-family candidate images."""
    grp = spec.group()
    orders = {g: element_order(grp, g) for g in grp.elements}
    if isinstance(spec, Dihedral):
        r, x = (1, 0), (0, 1)
        rot = [g for g in grp.elements if g[1] == 0 and orders[g] == spec.n]
        refl = [g for g in grp.elements if g[1] == 1]
        return [r, x], [rot, refl]
    if isinstance(spec, DKlein):
        r1, r2, r, x = (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)
        klein = [g for g in grp.elements if g[3] == 0 and g[2] == 0 and orders[g] == 2]
        rot = [g for g in grp.elements if g[3] == 0 and g[0] == 0 and g[1] == 0 and orders[g] == spec.o]
        outer = [g for g in grp.elements if g[3] == 1]
        return [r1, r2, r, x], [klein, klein, rot, outer]
    raise DomainError(f"{spec.render()} is not a nonabelian family instance")


def family_automorphisms(spec: FdgSpec) -> list[list[int]]:
    gens, cands = family_generators(spec)
    return enum_group_automorphisms(spec.group(), gens, cands)
