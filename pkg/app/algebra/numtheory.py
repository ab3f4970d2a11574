"""
Exact integer number theory: factorization, totients, multiplicative orders,
primitive roots and the full-divisor sets used by the ρ-classifier.

Factorization is trial division by the primes below 10**6 followed by
Brent's variant of Pollard rho on the cofactor; every cofactor is certified
prime with `sympy.isprime`, which is deterministic below 2**64.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

from sympy import isprime, primerange

from app.config import get_settings
from app.errors import CapacityError, DomainError

TRIAL_DIVISION_BOUND = 10**6

_SMALL_PRIMES: tuple[int, ...] = tuple(primerange(2, TRIAL_DIVISION_BOUND))


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as (prime, exponent) pairs, ascending by prime."""

    n: int
    pairs: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.pairs]

    def exponent(self, p: int) -> int:
        for q, e in self.pairs:
            if q == p:
                return e
        return 0

    def value(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class FullDivisorSet:
    base: int
    divisors: tuple[int, ...]

    def __contains__(self, t: int) -> bool:
        return t in self.divisors

    def __iter__(self):
        return iter(self.divisors)

    def __len__(self) -> int:
        return len(self.divisors)


def _brent_rho(n: int, c: int) -> int:
    """One Brent/Pollard rho run with polynomial x^2 + c; returns a divisor (possibly n)."""
    y, r, q, g = 2, 1, 1, 1
    m = 128
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += m
        r *= 2
    if g == n:
        # batch overshot; step singly from the saved point
        while True:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
            if g > 1:
                break
    return g


def _split(n: int) -> int:
    """Return a nontrivial divisor of the composite n."""
    if n % 2 == 0:
        return 2
    r = isqrt(n)
    if r * r == n:
        return r
    # deterministic constants so results never depend on global state
    for c in range(1, 200):
        d = _brent_rho(n, c)
        if 1 < d < n:
            return d
    raise DomainError(f"rho method failed to split {n}")


def _factor_cofactor(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if isprime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _split(n)
    _factor_cofactor(d, out)
    _factor_cofactor(n // d, out)


@lru_cache(maxsize=4096)
def _factor_cached(n: int) -> Factorization:
    found: dict[int, int] = {}
    rest = n
    certified = False
    for p in _SMALL_PRIMES:
        if p * p > rest:
            break
        if p > 1000 and not certified:
            # large prime cofactors skip the rest of the table
            certified = True
            if isprime(rest):
                break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            found[p] = e
    _factor_cofactor(rest, found)
    return Factorization(n=n, pairs=tuple(sorted(found.items())))


def factor(n: int, limit: int | None = None) -> Factorization:
    """Exact prime factorization of 1 <= n <= limit (default LAMBDA_FACTOR_LIMIT)."""
    if n < 1:
        raise DomainError(f"factor expects a positive integer, got {n}")
    bound = get_settings().factor_limit if limit is None else limit
    if n > bound:
        raise CapacityError("factor", n, bound)
    return _factor_cached(n)


def divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factor(n):
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def valuation(n: int, p: int) -> int:
    """ν_p(n) for n != 0."""
    if n == 0:
        raise DomainError("valuation of 0 is undefined")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def is_prime_power(n: int) -> tuple[int, int] | None:
    """(p, k) with n = p**k, k >= 1, or None."""
    if n < 2:
        return None
    f = factor(n)
    if len(f) != 1:
        return None
    return f.pairs[0]


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def euler_phi(n: int) -> int:
    if n < 1:
        raise DomainError(f"euler_phi expects n >= 1, got {n}")
    out = 1
    for p, e in factor(n):
        out *= p ** (e - 1) * (p - 1)
    return out


def carmichael(n: int) -> int:
    """Exponent of the unit group mod n."""
    parts = []
    for p, e in factor(n):
        if p == 2 and e >= 3:
            parts.append(2 ** (e - 2))
        else:
            parts.append(p ** (e - 1) * (p - 1))
    return lcm_all(parts)


def mult_order(a: int, n: int) -> int:
    """Least k >= 1 with a**k == 1 mod n, by descending from the group exponent."""
    if n < 1:
        raise DomainError(f"modulus must be positive, got {n}")
    if n == 1:
        return 1
    a %= n
    if gcd(a, n) != 1:
        raise DomainError(f"{a} is not a unit modulo {n}")
    k = carmichael(n)
    for q, _ in factor(k):
        while k % q == 0 and pow(a, k // q, n) == 1:
            k //= q
    return k


def primitive_roots(p: int, m: int = 1) -> list[int]:
    """All primitive roots modulo p**m (p odd prime, or p**m in {2, 4})."""
    if m < 1:
        raise DomainError(f"exponent must be >= 1, got {m}")
    q = p**m
    if q == 2:
        return [1]
    if q == 4:
        return [3]
    if p == 2 or not isprime(p):
        raise DomainError(f"no primitive-root convention for {p}^{m}")
    phi = q // p * (p - 1)
    prime_divs = factor(phi).primes
    return [
        g for g in range(1, q)
        if g % p and all(pow(g, phi // r, q) != 1 for r in prime_divs)
    ]


def first_primitive_root(p: int, m: int = 1) -> int:
    q = p**m
    if q in (2, 4):
        return primitive_roots(p, m)[0]
    phi = q // p * (p - 1)
    prime_divs = factor(phi).primes
    for g in range(2, q):
        if g % p and all(pow(g, phi // r, q) != 1 for r in prime_divs):
            return g
    raise DomainError(f"no primitive root modulo {q}")


def is_full_divisor(t: int, n: int) -> bool:
    if t < 1 or n % t:
        return False
    nf = factor(n)
    return all(nf.exponent(p) == e for p, e in factor(t))


def full_divisors(n: int) -> FullDivisorSet:
    """T(n): products of full prime-power parts p**ν_p(n) over subsets of primes."""
    if n < 1:
        raise DomainError(f"full_divisors expects n >= 1, got {n}")
    out = [1]
    for p, e in factor(n):
        out += [d * p**e for d in out]
    return FullDivisorSet(base=n, divisors=tuple(sorted(out)))


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def t0_set(n: int) -> FullDivisorSet:
    """T₀(n): full divisors t with t + 1 a power of two."""
    full = full_divisors(n)
    return FullDivisorSet(base=n, divisors=tuple(t for t in full if is_power_of_two(t + 1)))
