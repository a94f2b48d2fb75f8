"""Free nilpotent Lie algebras on a Hall basis.

Trees follow the basic-commutator convention: a pair ``(u, v)`` is a Hall
tree when ``u`` and ``v`` are Hall trees, ``u > v``, and, if ``u = (x, y)``,
then ``y <= v``.  Trees are ordered by degree and then by their canonical
string, so the resulting basis is adapted to the degree filtration.
"""
from __future__ import annotations

import sys
from fractions import Fraction
from typing import Union

from .lie_core import LieAlgebra

HallTree = Union[int, tuple]

MAX_DIM = 2000


def degree(t: HallTree) -> int:
    if isinstance(t, int):
        return 1
    return degree(t[0]) + degree(t[1])


def tree_str(t: HallTree) -> str:
    if isinstance(t, int):
        return f"x{t + 1}"
    return f"[{tree_str(t[0])},{tree_str(t[1])}]"


def tree_key(t: HallTree):
    return (degree(t), tree_str(t))


def is_hall(t: HallTree) -> bool:
    if isinstance(t, int):
        return True
    u, v = t
    if not (is_hall(u) and is_hall(v)):
        return False
    if tree_key(u) <= tree_key(v):
        return False
    return isinstance(u, int) or tree_key(u[1]) <= tree_key(v)


def hall_trees(k: int, c: int) -> list[HallTree]:
    """All Hall trees on ``k`` letters of degree at most ``c``, sorted."""
    by_deg: dict[int, list[HallTree]] = {1: list(range(k))}
    for d in range(2, c + 1):
        found = []
        for du in range(1, d):
            dv = d - du
            for u in by_deg[du]:
                for v in by_deg[dv]:
                    t = (u, v)
                    if is_hall(t):
                        found.append(t)
        by_deg[d] = found
    trees = [t for d in range(1, c + 1) for t in by_deg[d]]
    return sorted(trees, key=tree_key)


class _HallRewriter:
    """Expands brackets of Hall trees in the Hall basis, truncating degree > c."""

    def __init__(self, c: int):
        self.c = c
        self.memo: dict = {}

    def bracket(self, a: HallTree, b: HallTree) -> dict:
        if degree(a) + degree(b) > self.c or a == b:
            return {}
        key = (a, b)
        if key in self.memo:
            return self.memo[key]
        if tree_key(a) < tree_key(b):
            out = {t: -q for t, q in self.bracket(b, a).items()}
        elif isinstance(a, int) or tree_key(a[1]) <= tree_key(b):
            out = {(a, b): Fraction(1)}
        else:
            # [[x, y], z] = [[x, z], y] + [x, [y, z]]  with y > z
            x, y = a
            out = {}
            for s, q in self.bracket(x, b).items():
                for t, r in self.bracket(s, y).items():
                    out[t] = out.get(t, 0) + q * r
            for s, q in self.bracket(y, b).items():
                for t, r in self.bracket(x, s).items():
                    out[t] = out.get(t, 0) + q * r
            out = {t: q for t, q in out.items() if q}
        self.memo[key] = out
        return out


def build_free_nilpotent(k: int, c: int, max_dim: int = MAX_DIM) -> LieAlgebra:
    """Free nilpotent Lie algebra on ``k`` generators of class ``c``."""
    if k < 1 or c < 1:
        raise ValueError("need k >= 1 and c >= 1")
    if sum(witt_number(k, d) for d in range(1, c + 1)) > max_dim:
        raise ValueError(f"free nilpotent algebra ({k}, {c}) exceeds {max_dim} dimensions")
    trees = hall_trees(k, c)
    index = {t: i for i, t in enumerate(trees)}
    rw = _HallRewriter(c)
    dim = len(trees)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10000))
    try:
        brackets = {}
        for i in range(dim):
            for j in range(i + 1, dim):
                expansion = rw.bracket(trees[i], trees[j])
                if expansion:
                    vec = [Fraction(0)] * dim
                    for t, q in expansion.items():
                        vec[index[t]] = q
                    brackets[(i, j)] = tuple(vec)
    finally:
        sys.setrecursionlimit(old)
    labels = tuple(tree_str(t) for t in trees)
    return LieAlgebra(dim, brackets, labels, "standard")


def mobius(n: int) -> int:
    result, p, m = 1, 2, n
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    return -result if m > 1 else result


def witt_number(k: int, n: int) -> int:
    """Dimension of the degree-n part of the free Lie algebra on k letters."""
    total = sum(mobius(d) * k ** (n // d) for d in range(1, n + 1) if n % d == 0)
    return total // n
