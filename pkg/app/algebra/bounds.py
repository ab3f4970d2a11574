"""
Exact rational interval certification of the gap constants

    ρ₀ = (4/5)·∏_p (1 - 2^-p)              ≈ 0.504307524
    ρ₁ = (8/9)·∏_{n=3,5,8,49} (1 - 2^-n)·∏_{p>=11} (1 - 2^-p) ≈ 0.750063685

Infinite products over primes are split into an explicit head (primes up to
37) and a tail bounded below by ∏_{n>=m}(1 - 2^-n) >= exp(-1/2^(m-2)). The
exponential is bounded with a truncated alternating series, so every
endpoint is an exact Fraction and the true value provably lies inside.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd, prod
from typing import Iterable

from sympy import primerange

from app.algebra.classify import coprime_partitions, frobenius_lambda
from app.algebra.fdg import FdgSpec, Mult, PolyVec, Product, Lambda_of_spec, lambda_of_spec, lambda_product, spec_structure
from app.algebra.ffpoly import first_primitive
from app.algebra.numtheory import factor, is_prime_power, lcm_all, mult_order
from app.errors import CapacityError, ClassificationError, DomainError

logger = logging.getLogger(__name__)

HEAD_PRIME_LIMIT = 37
TAIL_START = 41
SERIES_REMAINDER = Fraction(1, 10**15)


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise DomainError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> RationalInterval:
        return cls(Fraction(x), Fraction(x))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __mul__(self, other: RationalInterval | Fraction | int) -> RationalInterval:
        # all certified quantities are positive
        if not isinstance(other, RationalInterval):
            other = RationalInterval.point(other)
        if self.lo < 0 or other.lo < 0:
            raise DomainError("interval products are only defined for nonnegative intervals")
        return RationalInterval(self.lo * other.lo, self.hi * other.hi)

    __rmul__ = __mul__

    def contains(self, x) -> bool:
        return self.lo <= Fraction(x) <= self.hi

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def strictly_below(self, other: RationalInterval) -> bool:
        return self.hi < other.lo

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def decimal_digits(interval: RationalInterval, k: int) -> str | None:
    """The first k decimals shared by both endpoints (truncated), or None if they differ."""
    scale = 10**k
    lo, hi = floor(interval.lo * scale), floor(interval.hi * scale)
    if lo != hi:
        return None
    whole, frac = divmod(lo, scale)
    return f"{whole}.{frac:0{k}d}" if k else str(whole)


def _exp_neg_bounds(x: Fraction) -> RationalInterval:
    """exp(-x) for 0 < x <= 2 from alternating partial sums past the peak term."""
    if not 0 < x <= 2:
        raise DomainError(f"exp(-x) bounds need 0 < x <= 2, got {x}")
    total = Fraction(1)
    term = Fraction(1)
    k = 0
    partial = [total]
    while True:
        k += 1
        term = term * x / k
        total += term if k % 2 == 0 else -term
        partial.append(total)
        # terms decrease from k >= x on, so consecutive sums bracket the limit
        if k >= 2 and term < SERIES_REMAINDER and k > x:
            break
    lower = partial[-1] if k % 2 == 1 else partial[-2]
    upper = partial[-2] if k % 2 == 1 else partial[-1]
    return RationalInterval(lower, upper)


def exp_lower(x: Fraction) -> Fraction:
    return _exp_neg_bounds(Fraction(x)).lo


def tail_bounds(m: int) -> RationalInterval:
    """Interval for ∏_{n>=m} (1 - 2^-n)."""
    if m < 1:
        raise DomainError(f"tail_bounds needs m >= 1, got {m}")
    x = Fraction(2, 2 ** (m - 1))
    return RationalInterval(exp_lower(x), Fraction(1))


def factor_product(exponents: Iterable[int]) -> Fraction:
    return prod((1 - Fraction(1, 2**n) for n in exponents), start=Fraction(1))


def prime_product(start: int, extra: Iterable[int] = (), coefficient: Fraction = Fraction(1)) -> RationalInterval:
    """coefficient·∏(1 - 2^-n) over `extra` and every prime p >= start."""
    head = factor_product(primerange(start, HEAD_PRIME_LIMIT + 1)) * factor_product(extra)
    return coefficient * head * tail_bounds(TAIL_START)


def rho0() -> RationalInterval:
    return prime_product(2, coefficient=Fraction(4, 5))


def rho1() -> RationalInterval:
    return prime_product(11, extra=(3, 5, 8, 49), coefficient=Fraction(8, 9))


# (id, explicit exponents, first prime, multiplier, claimed lower bound after multiplying)
ANLEM_BOUNDS: tuple[tuple[int, tuple[int, ...], int, Fraction, Fraction], ...] = (
    (1, (), 2, Fraction(1), Fraction("0.63038")),
    (2, (4,), 3, Fraction(1), Fraction("0.78797")),
    (3, (6,), 5, Fraction(4, 5), Fraction("0.755")),
    (4, (4, 9), 5, Fraction(6, 7), Fraction("0.76")),
    (5, (3, 8, 25), 7, Fraction(8, 9), Fraction("0.76")),
    (6, (3, 5, 8, 49), 11, Fraction(8, 9), Fraction("0.750063685")),
    (7, (8,), 3, Fraction(10, 11), Fraction("0.76")),
    (8, (3, 4, 25), 7, Fraction(12, 13), Fraction("0.7505")),
)


@dataclass(frozen=True)
class BoundVerdict:
    bound_id: int
    interval: RationalInterval
    threshold: Fraction
    multiplier: Fraction
    verified: bool


def anlem_certify() -> list[BoundVerdict]:
    """Lower bounds on λ of elementary abelian 2-group automorphisms, re-derived exactly."""
    out = []
    for bound_id, extra, start, mult, threshold in ANLEM_BOUNDS:
        interval = prime_product(start, extra=extra)
        ok = interval.hi < 1 and mult * interval.lo > threshold
        if not ok:
            logger.warning(f"bound {bound_id} failed: {mult}·{float(interval.lo)} vs {threshold}")
        out.append(BoundVerdict(bound_id, interval, threshold, mult, ok))
    return out


# --- gap scan -------------------------------------------------------------------------

@dataclass(frozen=True)
class GapViolation:
    shape: str
    lam: Fraction


def _shape_label(degrees: tuple[int, ...], q: int | None) -> str:
    parts = [f"V(P{d}@2)" for d in degrees]
    if q is not None:
        parts.append(f"odd part of order {q}")
    return " * ".join(parts) or "1"


def gap_scan(lo: Fraction, hi: Fraction, max_group_order: int, range_capacity: int = 10**6) -> list[GapViolation]:
    """Classified λ-shapes with |G| <= max_group_order and λ in (lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)
    if hi <= lo:
        return []
    max_rank = max_group_order.bit_length() - 1
    violations: list[GapViolation] = []
    for rank in range(max_rank + 1):
        for degrees in coprime_partitions(rank):
            lam2 = frobenius_lambda(degrees)
            if lam2 <= lo:
                continue
            if lam2 <= hi:
                violations.append(GapViolation(_shape_label(degrees, None), lam2))
                continue
            # λ = λ₂(1 - 1/q) with q an odd prime power coprime to Λ₂
            Lam2 = prod(2**d - 1 for d in degrees)
            q_min = floor(1 / (1 - lo / lam2)) + 1
            q_max = min(floor(1 / (1 - hi / lam2)), max_group_order >> rank)
            if q_max - q_min > range_capacity:
                raise CapacityError("gap_scan odd-part range", q_max - q_min, range_capacity)
            for q in range(max(q_min, 3), q_max + 1):
                pk = is_prime_power(q)
                if pk is None or pk[0] == 2 or gcd(Lam2, q - 1) != 1:
                    continue
                lam = lam2 * Fraction(q - 1, q)
                if lo < lam <= hi:
                    violations.append(GapViolation(_shape_label(degrees, q), lam))
    logger.info(f"gap_scan ({float(lo)}, {float(hi)}]: {len(violations)} violations")
    return violations


# --- limit sequences ------------------------------------------------------------------

@dataclass(frozen=True)
class LimitTerm:
    n: int
    degree: int
    witness: str
    lam: Fraction


def odd_order_lcm(spec: FdgSpec) -> int:
    """lcm of ord_2(q) over the odd primes q dividing Λ·|G| (1 if none)."""
    primes = {q for q in factor(Lambda_of_spec(spec) * spec.order).primes if q != 2}
    return lcm_all(mult_order(2, q) for q in primes)


def limit_sequence(base: FdgSpec, n_max: int) -> list[LimitTerm]:
    """λ of base × V(P_n) with deg P_n = n·o + 1, increasing to λ(base)."""
    rho = lambda_of_spec(base)
    base_cs = spec_structure(base)
    o = odd_order_lcm(base)
    out = []
    for n in range(1, n_max + 1):
        d = n * o + 1
        P = first_primitive(2, d)
        combined = lambda_product([base_cs, spec_structure(PolyVec(P))])
        expected = rho * (1 - Fraction(1, 2**d))
        if not combined.coprime or combined.value != expected:
            raise ClassificationError(f"degree {d} witness does not multiply λ exactly")
        out.append(LimitTerm(n=n, degree=d, witness=f"{base.render()} * V({P.label()})", lam=expected))
    return out


def rho0_sequence(n_max: int) -> list[LimitTerm]:
    """M(5,2) × V(P_2) × V(P_3) × ... × V(P_{p_n}), decreasing to ρ₀."""
    out = []
    specs: list[FdgSpec] = [Mult(5, 2)]
    for n, p in enumerate(primerange(2, 10**6), start=1):
        if n > n_max:
            break
        specs.append(PolyVec(first_primitive(2, p)))
        lam = Fraction(4, 5) * factor_product(primerange(2, p + 1))
        computed = lambda_product([spec_structure(s) for s in specs])
        if computed.value != lam:
            raise ClassificationError(f"ρ₀ sequence term {n} has λ = {computed.value}, expected {lam}")
        out.append(LimitTerm(n=n, degree=p, witness=Product(tuple(specs)).render(), lam=lam))
    return out
