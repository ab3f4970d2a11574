"""
Small dense integer matrices: products reduced row-wise, fraction-free
determinants, ranks and characteristic polynomials over F_p.

Matrices are tuples of row tuples. `mods` is the per-row modulus list
(p^e_i for an abelian p-group, all equal to p over a field).
"""

from __future__ import annotations

import random
from typing import Sequence

from app.algebra.ffpoly import FpPoly
from app.errors import DomainError

Matrix = tuple[tuple[int, ...], ...]


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    out = tuple(tuple(int(v) for v in row) for row in rows)
    n = len(out)
    if any(len(row) != n for row in out):
        raise DomainError(f"expected a square matrix, got row lengths {[len(r) for r in out]}")
    return out


def reduce_rows(A: Matrix, mods: Sequence[int]) -> Matrix:
    return tuple(tuple(v % m for v in row) for row, m in zip(A, mods))


def mat_mul(A: Matrix, B: Matrix, mods: Sequence[int]) -> Matrix:
    n = len(A)
    cols = list(zip(*B))
    return tuple(
        tuple(sum(a * b for a, b in zip(A[i], cols[j])) % mods[i] for j in range(n))
        for i in range(n)
    )


def mat_vec(A: Matrix, x: Sequence[int], mods: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(a * v for a, v in zip(row, x)) % m for row, m in zip(A, mods))


def det_bareiss(A: Matrix) -> int:
    """Exact integer determinant by fraction-free elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(row) for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rank_mod_p(A: Sequence[Sequence[int]], p: int) -> int:
    M = [[v % p for v in row] for row in A]
    rows = len(M)
    cols = len(M[0]) if M else 0
    rank = 0
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if M[r][c]), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        inv = pow(M[rank][c], -1, p)
        M[rank] = [v * inv % p for v in M[rank]]
        for r in range(rows):
            if r != rank and M[r][c]:
                f = M[r][c]
                M[r] = [(v - f * w) % p for v, w in zip(M[r], M[rank])]
        rank += 1
    return rank


def nullity_mod_p(A: Matrix, p: int) -> int:
    return len(A) - rank_mod_p(A, p)


def charpoly_mod_p(A: Matrix, p: int) -> FpPoly:
    """det(X·I - A) over F_p via reduction to Hessenberg form."""
    n = len(A)
    H = [[v % p for v in row] for row in A]
    for j in range(n - 2):
        pivot = next((i for i in range(j + 1, n) if H[i][j]), None)
        if pivot is None:
            continue
        if pivot != j + 1:
            H[pivot], H[j + 1] = H[j + 1], H[pivot]
            for row in H:
                row[pivot], row[j + 1] = row[j + 1], row[pivot]
        inv = pow(H[j + 1][j], -1, p)
        for k in range(j + 2, n):
            u = H[k][j] * inv % p
            if not u:
                continue
            H[k] = [(a - u * b) % p for a, b in zip(H[k], H[j + 1])]
            for row in H:
                row[j + 1] = (row[j + 1] + u * row[k]) % p
    X = FpPoly.x(p)
    polys = [FpPoly.const(p, 1)]
    for m in range(1, n + 1):
        cur = (X - FpPoly.const(p, H[m - 1][m - 1])) * polys[m - 1]
        prod = 1
        for i in range(1, m):
            prod = prod * H[m - i][m - i - 1] % p
            coef = H[m - 1 - i][m - 1] * prod % p
            if coef:
                cur = cur - polys[m - 1 - i] * coef
        polys.append(cur)
    return polys[n]


def poly_at_matrix(f: FpPoly, A: Matrix) -> Matrix:
    """f(A) over F_p by Horner's rule."""
    p = f.p
    n = len(A)
    mods = [p] * n
    out = tuple(tuple(0 for _ in range(n)) for _ in range(n))
    eye = identity(n)
    for c in reversed(f.coeffs):
        out = mat_mul(out, A, mods)
        out = tuple(
            tuple((out[i][j] + c * eye[i][j]) % p for j in range(n)) for i in range(n)
        )
    return out


def block_diag(*blocks: Matrix) -> Matrix:
    n = sum(len(b) for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        for row in b:
            rows.append((0,) * offset + tuple(row) + (0,) * (n - offset - len(b)))
        offset += len(b)
    return tuple(rows)


def random_invertible(n: int, p: int, rng: random.Random) -> Matrix:
    while True:
        A = tuple(tuple(rng.randrange(p) for _ in range(n)) for _ in range(n))
        if det_bareiss(A) % p:
            return A
