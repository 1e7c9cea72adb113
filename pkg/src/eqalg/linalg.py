"""Exact linear algebra over Q on lists of lists of ``Fraction``.

Matrices act on column vectors; an ``m x n`` matrix is a list of ``m`` rows.
Zero-sized matrices are allowed and keep their shape through ``shape``
arguments where it would otherwise be lost.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def zeros(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def to_fractions(a: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in a]


def matmul(a: Matrix, b: Matrix, inner: int | None = None, cols: int | None = None) -> Matrix:
    """``a @ b``; ``cols`` fixes the width when ``b`` has no rows."""
    if cols is None:
        cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [Fraction(0)] * cols
        for k, x in enumerate(row):
            if x:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        acc[j] += x * bk[j]
        out.append(acc)
    return out


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(c, a: Matrix) -> Matrix:
    c = Fraction(c)
    return [[c * x for x in row] for row in a]


def transpose(a: Matrix, cols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*a)]


def block_diag(blocks: Sequence[Matrix], shapes: Sequence[tuple[int, int]]) -> Matrix:
    rows = sum(s[0] for s in shapes)
    cols = sum(s[1] for s in shapes)
    out = zeros(rows, cols)
    r = c = 0
    for blk, (m, n) in zip(blocks, shapes):
        for i in range(m):
            for j in range(n):
                out[r + i][c + j] = blk[i][j]
        r += m
        c += n
    return out


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(row) for row in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1])


def column_space(a: Matrix, rows: int) -> Matrix:
    """Basis of the column space, chosen as the pivot columns of ``a``."""
    if not a or not a[0]:
        return [[] for _ in range(rows)]
    _, piv = rref(a)
    return [[row[c] for c in piv] for row in a]


def hstack(mats: Sequence[Matrix], rows: int) -> Matrix:
    out = [[] for _ in range(rows)]
    for mat in mats:
        for i in range(rows):
            out[i].extend(mat[i])
    return out


def solve(a: Matrix, b: Matrix, rows: int) -> Matrix | None:
    """Some ``x`` with ``a x = b`` (free variables set to zero), or None."""
    n = len(a[0]) if a else 0
    k = len(b[0]) if b else 0
    aug = [list(a[i]) + list(b[i]) for i in range(rows)]
    red, piv = rref(aug) if rows else ([], [])
    if any(p >= n for p in piv):
        return None
    x = zeros(n, k)
    for r, c in enumerate(piv):
        for j in range(k):
            x[c][j] = red[r][n + j]
    return x


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    x = solve(a, identity(n), n)
    if x is None or rank(a) != n:
        raise ZeroDivisionError("matrix is singular")
    return x


def complement_basis(basis: Matrix, rows: int) -> list[int]:
    """Standard basis indices that extend the columns of ``basis`` to a basis."""
    width = len(basis[0]) if basis and basis[0] else 0
    aug = hstack([basis, identity(rows)], rows)
    _, piv = rref(aug) if rows else ([], [])
    return [p - width for p in piv if p >= width]


def is_zero(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)
