"""
Congruential and vector generators built on periodic affine maps.

Output words: the state's residue tuple (s_0, ..., s_{n-1}) is packed
little-endian in base m, i.e. word = s_0 + s_1·m + ... + s_{n-1}·m^(n-1).
For an LCG the state is a single residue, so the word is the state itself.
The first word of a stream is the seed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import gcd
from typing import Iterator, Sequence

from app.algebra.ffpoly import FpPoly, companion, is_irreducible, is_primitive, parse_poly, poly_order
from app.algebra.linalg import mat_vec
from app.algebra.numtheory import factor
from app.config import get_settings
from app.errors import DomainError, NonPeriodicError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RngSpec:
    """Transition y ↦ A·y + c on (Z/m)^n with a fixed seed."""

    kind: str
    modulus: int
    seed: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]
    increment: tuple[int, ...]
    poly: FpPoly | None = None

    @property
    def dimension(self) -> int:
        return len(self.seed)

    @property
    def states(self) -> str:
        return f"Z{self.modulus}" if self.dimension == 1 else f"Z{self.modulus}^{self.dimension}"

    @property
    def state_count(self) -> int:
        return self.modulus**self.dimension

    def step(self, y: Sequence[int]) -> tuple[int, ...]:
        m = self.modulus
        Ay = mat_vec(self.matrix, y, [m] * self.dimension)
        return tuple((a + c) % m for a, c in zip(Ay, self.increment))

    def output(self, y: Sequence[int]) -> int:
        word = 0
        for v in reversed(y):
            word = word * self.modulus + v
        return word

    def render(self) -> str:
        if self.kind == "lcg":
            return f"lcg(m={self.modulus}, a={self.matrix[0][0]}, c={self.increment[0]}, seed={self.seed[0]})"
        return f"vec({self.poly.label()}, seed={self.seed})"


def lcg(m: int, a: int, c: int, seed: int = 0) -> RngSpec:
    """y ↦ a·y + c mod m."""
    if m < 1:
        raise DomainError(f"modulus must be >= 1, got {m}")
    if gcd(a, m) != 1:
        raise NonPeriodicError(f"gcd({a}, {m}) != 1, the map y -> {a}y + {c} is not a bijection")
    return RngSpec(kind="lcg", modulus=m, seed=(seed % m,), matrix=((a % m,),), increment=(c % m,))


def _seed_vector(seed: int | Sequence[int], p: int, d: int) -> tuple[int, ...]:
    if isinstance(seed, int):
        if not 0 <= seed < p**d:
            raise DomainError(f"seed {seed} is not a state of F_{p}^{d}")
        out = []
        for _ in range(d):
            seed, r = divmod(seed, p)
            out.append(r)
        return tuple(out)
    vec = tuple(int(v) % p for v in seed)
    if len(vec) != d:
        raise DomainError(f"seed has length {len(vec)}, expected {d}")
    return vec


def vecgen(p: int, poly: FpPoly | str, seed: int | Sequence[int] = 1) -> RngSpec:
    """y ↦ C·y with C the companion matrix of poly over F_p."""
    P = parse_poly(poly, p) if isinstance(poly, str) else poly
    if P.p != p:
        raise DomainError(f"{P.label()} is not over F_{p}")
    if P.coeffs[0] == 0:
        raise DomainError(f"{P.label()} has zero constant term, so the companion matrix is singular")
    C = companion(P)
    d = P.degree
    return RngSpec(
        kind="vec",
        modulus=p,
        seed=_seed_vector(seed, p, d),
        matrix=C.rows,
        increment=(0,) * d,
        poly=P,
    )


def certify_full_period(spec: RngSpec) -> bool:
    """Full period decided from congruences, without iterating.

    LCG: gcd(c, m) = 1, a ≡ 1 mod every prime of m, a ≡ 1 mod 4 if 4 | m.
    Vector: primitive polynomial and a nonzero seed (period p^d - 1).
    """
    if spec.kind == "lcg":
        m, a, c = spec.modulus, spec.matrix[0][0], spec.increment[0]
        if m == 1:
            return True
        if gcd(c, m) != 1:
            return False
        if any((a - 1) % q for q in factor(m).primes):
            return False
        return not (m % 4 == 0 and (a - 1) % 4)
    P = spec.poly
    return any(spec.seed) and is_irreducible(P) and is_primitive(P)


def certified_period(spec: RngSpec) -> int | None:
    """Exact period when it follows from the congruences or polynomial order, else None."""
    if spec.kind == "lcg":
        return spec.modulus if certify_full_period(spec) else None
    if not any(spec.seed):
        return 1
    if is_irreducible(spec.poly):
        return poly_order(spec.poly)
    return None


class RngStream:
    """Single-owner cursor over the output words of a spec."""

    def __init__(self, spec: RngSpec):
        self.spec = spec
        self.state = spec.seed
        self.emitted = 0

    def __iter__(self) -> Iterator[int]:
        return self

    def __next__(self) -> int:
        word = self.spec.output(self.state)
        self.state = self.spec.step(self.state)
        self.emitted += 1
        return word

    def take(self, count: int) -> list[int]:
        return [next(self) for _ in range(count)]


def stream(spec: RngSpec, count: int) -> list[int]:
    if count < 0:
        raise DomainError(f"count must be >= 0, got {count}")
    return RngStream(spec).take(count)


def measured_period(spec: RngSpec, cap: int | None = None) -> int | None:
    """Steps until the seed recurs, or None when the cap is reached first."""
    bound = min(spec.state_count, get_settings().orbit_capacity) if cap is None else cap
    if bound < 1:
        raise DomainError(f"cap must be >= 1, got {bound}")
    y = spec.step(spec.seed)
    steps = 1
    while y != spec.seed:
        if steps >= bound:
            logger.warning(f"{spec.render()}: period exceeds cap {bound}")
            return None
        y = spec.step(y)
        steps += 1
    return steps
