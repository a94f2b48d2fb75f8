"""Exact linear algebra over the rationals.

Vectors are tuples of Fractions, matrices are tuples of rows.  Everything here
is small and dense; the algebras we handle have dimension in the tens.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]


def as_vector(values: Iterable) -> Vector:
    return tuple(Fraction(v) for v in values)


def zero(n: int) -> Vector:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> Vector:
    return tuple(Fraction(1) if k == i else Fraction(0) for k in range(n))


def is_zero(v: Sequence) -> bool:
    return not any(v)


def add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> Vector:
    c = Fraction(c)
    return tuple(c * a for a in v)


def combine(coeffs: Sequence, rows: Sequence[Sequence], n: int) -> Vector:
    out = [Fraction(0)] * n
    for c, row in zip(coeffs, rows):
        if c:
            for k, a in enumerate(row):
                if a:
                    out[k] += c * a
    return tuple(out)


def rref(rows: Iterable[Sequence], n: int) -> tuple[tuple[Vector, ...], tuple[int, ...]]:
    """Reduced row echelon form; pivot is the first nonzero column.

    Returns the nonzero rows and their pivot columns, both in increasing pivot
    order.
    """
    mat = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if p is None:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [a * inv for a in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return tuple(tuple(row) for row in mat[:r]), tuple(pivots)


def solve(rows: Sequence[Sequence], v: Sequence) -> list[Fraction] | None:
    """Coefficients c with sum(c[i] * rows[i]) == v, or None if v is not in the span.

    ``rows`` must be linearly independent.
    """
    m = len(rows)
    n = len(v)
    if m == 0:
        return [] if is_zero(v) else None
    # Augmented system A^T c = v with A having the given rows.
    aug = [[Fraction(rows[i][k]) for i in range(m)] + [Fraction(v[k])] for k in range(n)]
    piv_cols = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if p is None:
            raise ValueError("rows are linearly dependent")
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [a * inv for a in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    if any(aug[i][m] != 0 for i in range(r, n)):
        return None
    return [aug[i][m] for i in range(m)]


def mat_vec(mat: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in mat)


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple[Vector, ...]:
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols) for row in a)


def identity(n: int) -> tuple[Vector, ...]:
    return tuple(unit(n, i) for i in range(n))


def inverse(mat: Sequence[Sequence]) -> tuple[Vector, ...] | None:
    n = len(mat)
    aug = [list(map(Fraction, row)) + list(unit(n, i)) for i, row in enumerate(mat)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if p is None:
            return None
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [a * inv for a in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return tuple(tuple(row[n:]) for row in aug)


def transpose(mat: Sequence[Sequence]) -> tuple[Vector, ...]:
    return tuple(tuple(col) for col in zip(*mat))
