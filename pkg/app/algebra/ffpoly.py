"""
Polynomials over prime fields F_p.

Coefficients are stored lowest degree first with no trailing zeros; text
output is highest degree first ("x^4+x+1"). Polynomial text accepts either
order, juxtaposed or starred coefficients, parentheses and integer powers,
with the modulus given as " mod p" or "@p".

Factorization runs square-free decomposition, distinct-degree splitting and
Cantor-Zassenhaus equal-degree splitting driven by a seeded `random.Random`,
so repeated runs give identical factor lists.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import lru_cache

from sympy import isprime

from app.algebra.numtheory import euler_phi, factor, lcm_all, mult_order
from app.config import get_settings
from app.errors import CapacityError, DomainError

_is_prime = lru_cache(maxsize=1024)(isprime)


@dataclass(frozen=True)
class FpPoly:
    p: int
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        if not _is_prime(self.p):
            raise DomainError(f"modulus must be a prime, got {self.p}")
        cs = [c % self.p for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # --- construction -------------------------------------------------

    @classmethod
    def x(cls, p: int) -> FpPoly:
        return cls(p, (0, 1))

    @classmethod
    def const(cls, p: int, c: int) -> FpPoly:
        return cls(p, (c,))

    @classmethod
    def parse(cls, text: str, p: int | None = None) -> FpPoly:
        return parse_poly(text, p)

    # --- basic attributes ----------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_monic(self) -> bool:
        return self.lead == 1

    @property
    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def sort_key(self) -> tuple:
        return (self.degree, tuple(reversed(self.coeffs)))

    def __lt__(self, other: FpPoly) -> bool:
        return self.sort_key() < other.sort_key()

    def __call__(self, value: int) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = (out * value + c) % self.p
        return out

    def __str__(self) -> str:
        return poly_to_str(self)

    def label(self) -> str:
        return f"{poly_to_str(self)}@{self.p}"

    # --- ring operations -----------------------------------------------

    def _check(self, other: FpPoly) -> None:
        if not isinstance(other, FpPoly):
            raise DomainError(f"expected FpPoly, got {type(other).__name__}")
        if other.p != self.p:
            raise DomainError(f"mismatched moduli {self.p} and {other.p}")

    def __add__(self, other: FpPoly) -> FpPoly:
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return FpPoly(self.p, tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> FpPoly:
        return FpPoly(self.p, tuple(-c for c in self.coeffs))

    def __sub__(self, other: FpPoly) -> FpPoly:
        return self + (-other)

    def __mul__(self, other: FpPoly | int) -> FpPoly:
        if isinstance(other, int):
            return FpPoly(self.p, tuple(c * other for c in self.coeffs))
        self._check(other)
        if self.is_zero or other.is_zero:
            return FpPoly(self.p)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return FpPoly(self.p, tuple(out))

    __rmul__ = __mul__

    def __divmod__(self, other: FpPoly) -> tuple[FpPoly, FpPoly]:
        self._check(other)
        if other.is_zero:
            raise DomainError("division by the zero polynomial")
        p = self.p
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return FpPoly(p), self
        inv = pow(other.lead, -1, p)
        quot = [0] * (dq + 1)
        db = other.degree
        for k in range(dq, -1, -1):
            c = rem[k + db] * inv % p
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = (rem[k + j] - c * b) % p
        return FpPoly(p, tuple(quot)), FpPoly(p, tuple(rem[:db]))

    def __floordiv__(self, other: FpPoly) -> FpPoly:
        return divmod(self, other)[0]

    def __mod__(self, other: FpPoly) -> FpPoly:
        return divmod(self, other)[1]

    def __pow__(self, e: int) -> FpPoly:
        if e < 0:
            raise DomainError("negative powers are not polynomials")
        out = FpPoly.const(self.p, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def pow_mod(self, e: int, modulus: FpPoly) -> FpPoly:
        self._check(modulus)
        if e < 0:
            raise DomainError("negative exponent")
        out = FpPoly.const(self.p, 1) % modulus
        base = self % modulus
        while e:
            if e & 1:
                out = (out * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return out

    def monic(self) -> FpPoly:
        if self.is_zero:
            return self
        return self * pow(self.lead, -1, self.p)

    def derivative(self) -> FpPoly:
        return FpPoly(self.p, tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def pth_root(self) -> FpPoly:
        """Q with Q**p == self, for self with zero derivative."""
        if any(c for i, c in enumerate(self.coeffs) if i % self.p):
            raise DomainError(f"{self} is not a p-th power")
        return FpPoly(self.p, self.coeffs[:: self.p])


def gcd(a: FpPoly, b: FpPoly) -> FpPoly:
    """Monic gcd (zero only when both inputs are zero)."""
    a._check(b)
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


# --- text --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([xX])|(\^|\*\*)|([-+*()]))")


def _split_modulus(text: str, p: int | None) -> tuple[str, int]:
    body = text.strip()
    m = re.search(r"(?:@|\bmod\b)\s*(\d+)\s*$", body)
    if m:
        body = body[: m.start()].strip()
        given = int(m.group(1))
        if p is not None and p != given:
            raise DomainError(f"modulus {given} in text disagrees with {p}")
        p = given
    if p is None:
        raise DomainError(f"no modulus given for polynomial {text!r}")
    if not isprime(p):
        raise DomainError(f"modulus {p} is not prime")
    return body, p


def parse_poly(text: str, p: int | None = None) -> FpPoly:
    """Parse "x^4+x+1 mod 2", "x^4+x+1@2", "(x-2)^2@3" or "1+x" with p given."""
    body, p = _split_modulus(text, p)
    tokens: list[str] = []
    pos = 0
    while pos < len(body):
        m = _TOKEN.match(body, pos)
        if not m or m.end() == pos:
            raise DomainError(f"cannot parse polynomial {text!r} at {body[pos:]!r}")
        tokens.append(next(g for g in m.groups() if g is not None))
        pos = m.end()
    if not tokens:
        raise DomainError(f"empty polynomial {text!r}")

    X = FpPoly.x(p)
    idx = 0

    def peek() -> str | None:
        return tokens[idx] if idx < len(tokens) else None

    def take() -> str:
        nonlocal idx
        tok = tokens[idx]
        idx += 1
        return tok

    def atom() -> FpPoly:
        tok = peek()
        if tok is None:
            raise DomainError(f"unexpected end of {text!r}")
        if tok == "(":
            take()
            inner = expr()
            if peek() != ")":
                raise DomainError(f"unbalanced parentheses in {text!r}")
            take()
            return inner
        if tok in ("x", "X"):
            take()
            return X
        if tok.isdigit():
            take()
            return FpPoly.const(p, int(tok))
        raise DomainError(f"unexpected {tok!r} in {text!r}")

    def power() -> FpPoly:
        base = atom()
        if peek() in ("^", "**"):
            take()
            tok = take() if peek() is not None else ""
            if not tok.isdigit():
                raise DomainError(f"exponent must be a non-negative integer in {text!r}")
            return base ** int(tok)
        return base

    def term() -> FpPoly:
        out = power()
        while peek() is not None and peek() not in ("+", "-", ")"):
            if peek() == "*":
                take()
            out = out * power()
        return out

    def expr() -> FpPoly:
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        out = term() * sign
        while peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
            out = out + term() * sign
        return out

    result = expr()
    if idx != len(tokens):
        raise DomainError(f"trailing input in {text!r}")
    return result


def poly_to_str(f: FpPoly) -> str:
    if f.is_zero:
        return "0"
    parts = []
    for i in range(f.degree, -1, -1):
        c = f.coeffs[i]
        if not c:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            mono = "x" if i == 1 else f"x^{i}"
            parts.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(parts)


# --- irreducibility and factorization ------------------------------------

def is_irreducible(f: FpPoly) -> bool:
    """Distinct-degree test: gcd(X^(p^k) - X, f) = 1 for k <= deg/2."""
    if f.degree < 1:
        raise DomainError(f"irreducibility is undefined for constant {f}")
    if f.degree == 1:
        return True
    f = f.monic()
    X = FpPoly.x(f.p)
    h = X
    for _ in range(f.degree // 2):
        h = h.pow_mod(f.p, f)
        if not gcd(h - X, f).is_one:
            return False
    return True


def squarefree_decomposition(f: FpPoly) -> list[tuple[FpPoly, int]]:
    """Yun's algorithm adapted to characteristic p; f monic, nonconstant."""
    out: list[tuple[FpPoly, int]] = []
    p = f.p
    g = gcd(f, f.derivative())
    w = f // g
    i = 1
    while not w.is_one:
        y = gcd(w, g)
        z = w // y
        if not z.is_one:
            out.append((z, i))
        i += 1
        w = y
        g = g // y
    if not g.is_one:
        for h, j in squarefree_decomposition(g.pth_root()):
            out.append((h, j * p))
    return out


def distinct_degree(f: FpPoly) -> list[tuple[FpPoly, int]]:
    """Split square-free monic f into products of irreducibles of equal degree."""
    out: list[tuple[FpPoly, int]] = []
    X = FpPoly.x(f.p)
    rest = f
    h = X
    d = 1
    while rest.degree >= 2 * d:
        h = h.pow_mod(f.p, rest)
        g = gcd(rest, h - X)
        if not g.is_one:
            out.append((g, d))
            rest = rest // g
            h = h % rest
        d += 1
    if rest.degree >= 1:
        out.append((rest, rest.degree))
    return out


def _random_poly(p: int, below: int, rng: random.Random) -> FpPoly:
    return FpPoly(p, tuple(rng.randrange(p) for _ in range(below)))


def equal_degree(f: FpPoly, d: int, rng: random.Random) -> list[FpPoly]:
    """Cantor-Zassenhaus split of monic f, a product of distinct degree-d irreducibles."""
    if f.degree == d:
        return [f]
    p = f.p
    while True:
        a = _random_poly(p, f.degree, rng)
        if a.degree < 1:
            continue
        if p == 2:
            # trace map a + a^2 + ... + a^(2^(d-1))
            t = a % f
            acc = t
            for _ in range(d - 1):
                t = (t * t) % f
                acc = acc + t
            b = acc
        else:
            b = a.pow_mod((p**d - 1) // 2, f) - FpPoly.const(p, 1)
        g = gcd(f, b)
        if 0 < g.degree < f.degree:
            return equal_degree(g, d, rng) + equal_degree(f // g, d, rng)


@lru_cache(maxsize=4096)
def _factor_cached(f: FpPoly, seed: int) -> tuple[tuple[FpPoly, int], ...]:
    rng = random.Random(seed)
    counts: dict[FpPoly, int] = {}
    for part, mult in squarefree_decomposition(f):
        for block, d in distinct_degree(part):
            for irr in equal_degree(block, d, rng):
                counts[irr] = counts.get(irr, 0) + mult
    return tuple(sorted(counts.items(), key=lambda item: item[0].sort_key()))


def factor_poly(f: FpPoly, seed: int | None = None) -> list[tuple[FpPoly, int]]:
    """Monic irreducible factors with multiplicities, canonically sorted."""
    if f.degree < 1:
        raise DomainError(f"cannot factor constant {f}")
    s = get_settings().seed if seed is None else seed
    return list(_factor_cached(f.monic(), s))


# --- orders and primitivity ---------------------------------------------

def _order_of_x(f: FpPoly) -> int:
    """Order of X modulo the irreducible f (f(0) != 0)."""
    p, d = f.p, f.degree
    if d == 1:
        return mult_order(-f.coeffs[0] * pow(f.coeffs[1], -1, p), p)
    X = FpPoly.x(p)
    n = p**d - 1
    for q, _ in factor(n):
        while n % q == 0 and X.pow_mod(n // q, f).is_one:
            n //= q
    return n


def poly_order(q: FpPoly) -> int:
    """Least o >= 1 with q | X^o - 1."""
    if q.degree < 1:
        raise DomainError(f"order is undefined for constant {q}")
    if q.coeffs[0] == 0:
        raise DomainError(f"{q} has zero constant term, so it divides no X^o - 1")
    parts = []
    for irr, k in factor_poly(q):
        t = 0
        while q.p**t < k:
            t += 1
        parts.append(_order_of_x(irr) * q.p**t)
    return lcm_all(parts)


def _x_has_full_order(f: FpPoly) -> bool:
    p, d = f.p, f.degree
    n = p**d - 1
    X = FpPoly.x(p)
    if d == 1:
        return _order_of_x(f) == n
    if not X.pow_mod(n, f).is_one:
        return False
    return all(not X.pow_mod(n // q, f).is_one for q, _ in factor(n))


def is_primitive(f: FpPoly) -> bool:
    """True iff the monic irreducible f has order p^deg - 1."""
    if f.degree < 1 or not f.is_monic:
        raise DomainError(f"{f} is not a monic nonconstant polynomial")
    if not is_irreducible(f):
        raise DomainError(f"{f} is reducible over F_{f.p}")
    if f.coeffs[0] == 0:
        return False
    return _x_has_full_order(f)


def count_primitive(p: int, d: int) -> int:
    """φ(p^d - 1)/d."""
    return euler_phi(p**d - 1) // d


def _monic_candidates(p: int, d: int):
    # lexicographic in descending-degree coefficients: c_{d-1}, ..., c_0
    for idx in range(p**d):
        digits = []
        for _ in range(d):
            digits.append(idx % p)
            idx //= p
        yield tuple(digits) + (1,)


def enum_primitive(p: int, d: int, capacity: int | None = None) -> list[FpPoly]:
    """Every monic primitive polynomial of degree d over F_p, in canonical order."""
    if d < 1:
        raise DomainError(f"degree must be >= 1, got {d}")
    if not isprime(p):
        raise DomainError(f"{p} is not prime")
    bound = get_settings().poly_capacity if capacity is None else capacity
    if p**d > bound:
        raise CapacityError(f"enum_primitive({p}, {d})", p**d, bound)
    out = []
    for coeffs in _monic_candidates(p, d):
        if coeffs[0] == 0:
            continue
        f = FpPoly(p, coeffs)
        if _x_has_full_order(f):
            out.append(f)
    return sorted(out, key=FpPoly.sort_key)


def enum_irreducible(p: int, d: int) -> list[FpPoly]:
    """Monic irreducibles of degree d over F_p other than X, in canonical order."""
    out = [FpPoly(p, c) for c in _monic_candidates(p, d) if c[0] != 0]
    return sorted((f for f in out if is_irreducible(f)), key=FpPoly.sort_key)


@lru_cache(maxsize=256)
def first_primitive(p: int, d: int) -> FpPoly:
    """The canonically first primitive polynomial of degree d (no capacity bound)."""
    for coeffs in _monic_candidates(p, d):
        if coeffs[0] == 0:
            continue
        f = FpPoly(p, coeffs)
        if _x_has_full_order(f):
            return f
    raise DomainError(f"no primitive polynomial of degree {d} over F_{p}")


# --- companion matrices ---------------------------------------------------

@dataclass(frozen=True)
class CompanionMatrix:
    p: int
    size: int
    rows: tuple[tuple[int, ...], ...]
    poly: FpPoly


def companion(f: FpPoly) -> CompanionMatrix:
    """Ones on the subdiagonal, negated low coefficients in the last column."""
    if f.degree < 1:
        raise DomainError(f"companion matrix needs degree >= 1, got {f}")
    if not f.is_monic:
        raise DomainError(f"{f} is not monic")
    d, p = f.degree, f.p
    rows = []
    for i in range(d):
        row = [0] * d
        if i > 0:
            row[i - 1] = 1
        row[d - 1] = -f.coeffs[i] % p
        rows.append(tuple(row))
    return CompanionMatrix(p=p, size=d, rows=tuple(rows), poly=f)
