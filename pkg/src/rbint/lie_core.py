"""Finite-dimensional Lie algebras over Q given by structure constants.

A :class:`LieAlgebra` carries a descending filtration ``F_1 ⊇ F_2 ⊇ ...``
stored as an explicit chain of :class:`Subspace` objects.  Beyond the last
stored level the chain is constant, so a chain ending in ``{0}`` describes a
filtration that reaches zero, and a chain ending in a nonzero space describes
one that stabilises (the trivial filtration is the one-level chain ``[g]``).

Indices are 0-based throughout the Python API.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from . import _linalg as la

INF = math.inf


# -- scalars -----------------------------------------------------------------

def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or a number into a normalised Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, float):
        raise TypeError("floats are not accepted; pass a rational string")
    return Fraction(str(text).strip())


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_vector(text: str, dim: int | None = None) -> tuple[Fraction, ...]:
    """Parse a comma separated coordinate list such as ``"1,0,-1/2"``."""
    parts = [p for p in text.split(",")] if text.strip() else []
    vec = tuple(parse_rational(p) for p in parts)
    if dim is not None and len(vec) != dim:
        raise ValueError(f"expected {dim} coordinates, got {len(vec)}")
    return vec


def format_vector(v: Sequence) -> str:
    return ",".join(format_rational(c) for c in v)


# -- subspaces ---------------------------------------------------------------

class Subspace:
    """A subspace of Q^n held as a reduced row echelon basis."""

    __slots__ = ("n", "rows", "pivots")

    def __init__(self, vectors: Iterable[Sequence], n: int):
        self.n = n
        self.rows, self.pivots = la.rref(list(vectors), n)

    @classmethod
    def whole(cls, n: int) -> Subspace:
        return cls(la.identity(n), n)

    @classmethod
    def zero(cls, n: int) -> Subspace:
        return cls([], n)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence) -> la.Vector:
        """Remainder of ``v`` after clearing the pivot columns."""
        out = list(map(Fraction, v))
        for row, p in zip(self.rows, self.pivots):
            c = out[p]
            if c:
                out = [a - c * b for a, b in zip(out, row)]
        return tuple(out)

    def contains(self, v) -> bool:
        coords = v.coords if isinstance(v, LieElement) else v
        return la.is_zero(self.reduce(coords))

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubset(self, other: Subspace) -> bool:
        return all(other.contains(r) for r in self.rows)

    def __le__(self, other: Subspace) -> bool:
        return self.issubset(other)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, self.rows))

    def join(self, other: Subspace | Iterable[Sequence]) -> Subspace:
        extra = other.rows if isinstance(other, Subspace) else list(other)
        return Subspace(list(self.rows) + list(extra), self.n)

    def coordinates(self, v: Sequence) -> list[Fraction] | None:
        """Coefficients of ``v`` in the echelon basis, or None if ``v`` is outside."""
        if not self.contains(v):
            return None
        # In reduced echelon form the coefficient on row i is v[pivot_i].
        return [Fraction(v[p]) for p in self.pivots]

    def __repr__(self):
        body = "; ".join(format_vector(r) for r in self.rows)
        return f"Subspace(dim={self.dim}, [{body}])"


# -- elements ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LieElement:
    coords: tuple
    home: "LieAlgebra"

    def __post_init__(self):
        if len(self.coords) != self.home.dim:
            raise ValueError(f"expected {self.home.dim} coordinates, got {len(self.coords)}")

    def _check(self, other: LieElement):
        if not isinstance(other, LieElement):
            return NotImplemented
        if other.home is not self.home:
            raise ValueError("elements live in different Lie algebras")
        return None

    def __add__(self, other):
        if (bad := self._check(other)) is not None:
            return bad
        return LieElement(la.add(self.coords, other.coords), self.home)

    def __sub__(self, other):
        if (bad := self._check(other)) is not None:
            return bad
        return LieElement(la.sub(self.coords, other.coords), self.home)

    def __neg__(self):
        return LieElement(tuple(-c for c in self.coords), self.home)

    def __mul__(self, c):
        if isinstance(c, (int, Fraction)):
            return LieElement(la.scale(c, self.coords), self.home)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, LieElement)
            and other.home is self.home
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((id(self.home), self.coords))

    def __bool__(self):
        return not la.is_zero(self.coords)

    def is_zero(self) -> bool:
        return la.is_zero(self.coords)

    def __repr__(self):
        terms = []
        for c, lab in zip(self.coords, self.home.labels):
            if c:
                terms.append(lab if c == 1 else f"-{lab}" if c == -1 else f"{format_rational(c)}*{lab}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


# -- algebras ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Lie algebra with structure constants ``brackets[(i, j)]`` for ``i < j``.

    ``filtration`` is either ``"standard"`` (the lower central series) or a
    sequence of spanning sets for ``F_1, F_2, ...``.
    """

    dim: int
    brackets: Mapping[tuple[int, int], tuple]
    labels: tuple[str, ...] = ()
    filtration_spec: object = "standard"
    _table: list = field(init=False, repr=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        labels = tuple(self.labels) or tuple(f"e{i + 1}" for i in range(self.dim))
        if len(labels) != self.dim:
            raise ValueError("one label per basis vector is required")
        object.__setattr__(self, "labels", labels)
        clean = {}
        table = [[() for _ in range(self.dim)] for _ in range(self.dim)]
        for (i, j), vec in self.brackets.items():
            if not (0 <= i < j < self.dim):
                raise ValueError(f"bracket key {(i, j)} must satisfy 0 <= i < j < dim")
            vec = la.as_vector(vec)
            if len(vec) != self.dim:
                raise ValueError(f"bracket ({i},{j}) has wrong length")
            if la.is_zero(vec):
                continue
            clean[(i, j)] = vec
            sparse = tuple((k, c) for k, c in enumerate(vec) if c)
            table[i][j] = sparse
            table[j][i] = tuple((k, -c) for k, c in sparse)
        object.__setattr__(self, "brackets", clean)
        object.__setattr__(self, "_table", table)

    # basic elements
    def element(self, coords: Iterable) -> LieElement:
        return LieElement(la.as_vector(coords), self)

    def basis(self, i: int) -> LieElement:
        return LieElement(la.unit(self.dim, i), self)

    def basis_elements(self) -> list[LieElement]:
        return [self.basis(i) for i in range(self.dim)]

    def zero(self) -> LieElement:
        return LieElement(la.zero(self.dim), self)

    def bracket_basis(self, i: int, j: int) -> tuple:
        """Sparse ``((k, c), ...)`` expansion of ``[e_i, e_j]``."""
        return self._table[i][j]

    def bracket_coords(self, x: Sequence, y: Sequence) -> la.Vector:
        out = [Fraction(0)] * self.dim
        xs = [(i, a) for i, a in enumerate(x) if a]
        ys = [(j, b) for j, b in enumerate(y) if b]
        for i, a in xs:
            row = self._table[i]
            for j, b in ys:
                ab = a * b
                for k, c in row[j]:
                    out[k] += ab * c
        return tuple(out)

    def bracket(self, x: LieElement, y: LieElement) -> LieElement:
        if x.home is not self or y.home is not self:
            raise ValueError("bracket of elements from a different algebra")
        return LieElement(self.bracket_coords(x.coords, y.coords), self)

    @cached_property
    def is_abelian(self) -> bool:
        return not self.brackets

    # filtrations
    @cached_property
    def lcs(self) -> tuple[Subspace, ...]:
        chain = [Subspace.whole(self.dim)]
        while True:
            prev = chain[-1]
            gens = [
                self.bracket_coords(la.unit(self.dim, i), r)
                for i in range(self.dim)
                for r in prev.rows
            ]
            nxt = Subspace(gens, self.dim)
            if nxt == prev:
                return tuple(chain)
            chain.append(nxt)
            if nxt.dim == 0:
                return tuple(chain)

    @cached_property
    def nilpotency_class(self) -> int | None:
        """Smallest c with g^(c+1) = 0, or None if the algebra is not nilpotent."""
        chain = self.lcs
        return len(chain) - 1 if chain[-1].dim == 0 else None

    @property
    def is_nilpotent(self) -> bool:
        return self.nilpotency_class is not None

    @cached_property
    def filtration(self) -> tuple[Subspace, ...]:
        spec = self.filtration_spec
        if spec is None or spec == "standard":
            return self.lcs
        if isinstance(spec, str):
            raise ValueError(f"unknown filtration {spec!r}")
        levels = []
        for level in spec:
            if isinstance(level, Subspace):
                levels.append(level)
            else:
                levels.append(Subspace([la.as_vector(v) for v in level], self.dim))
        if not levels:
            raise ValueError("an explicit filtration needs at least F_1")
        return tuple(levels)

    @property
    def has_standard_filtration(self) -> bool:
        return self.filtration == self.lcs

    def level(self, n: int) -> Subspace:
        """F_n, with the chain held constant past its last stored level."""
        if n < 1:
            raise ValueError("filtration levels start at 1")
        chain = self.filtration
        return chain[min(n, len(chain)) - 1]

    @cached_property
    def depth(self) -> int | None:
        """Smallest N with F_(N+1) = 0, or None if the filtration never reaches 0."""
        chain = self.filtration
        if chain[-1].dim != 0:
            return None
        return next(n for n in range(1, len(chain) + 1) if chain[n - 1].dim == 0) - 1

    @cached_property
    def basis_degrees(self) -> tuple:
        return tuple(filtration_degree(self.basis(i)) for i in range(self.dim))

    @cached_property
    def is_adapted(self) -> bool:
        """True when every F_n is spanned by the basis vectors it contains."""
        degs = self.basis_degrees
        return all(
            lvl.dim == sum(1 for d in degs if d >= n)
            for n, lvl in enumerate(self.filtration, start=1)
        )

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, labels={self.labels})"


def bracket(x: LieElement, y: LieElement) -> LieElement:
    if x.home is not y.home:
        raise ValueError("elements live in different Lie algebras")
    return x.home.bracket(x, y)


def lower_central_series(g: LieAlgebra) -> list[Subspace]:
    return list(g.lcs)


def filtration_degree(x: LieElement) -> float | int:
    """Largest n with x in F_n; INF when x lies in every level."""
    g = x.home
    if x.is_zero():
        return INF
    chain = g.filtration
    deg = 0
    for n, lvl in enumerate(chain, start=1):
        if not lvl.contains(x.coords):
            return deg
        deg = n
    return INF


# -- validation --------------------------------------------------------------

@dataclass
class ValidationReport:
    jacobi: bool = True
    jacobi_witness: tuple | None = None
    filtration: bool = True
    filtration_witness: dict | None = None

    @property
    def ok(self) -> bool:
        return self.jacobi and self.filtration


def validate(g: LieAlgebra) -> ValidationReport:
    """Check Jacobi on basis triples and the filtration axioms."""
    rep = ValidationReport()
    n = g.dim
    units = [la.unit(n, i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                a, b, c = units[i], units[j], units[k]
                s = la.add(
                    la.add(
                        g.bracket_coords(a, g.bracket_coords(b, c)),
                        g.bracket_coords(b, g.bracket_coords(c, a)),
                    ),
                    g.bracket_coords(c, g.bracket_coords(a, b)),
                )
                if not la.is_zero(s):
                    rep.jacobi = False
                    rep.jacobi_witness = (i, j, k)
                    break
            if not rep.jacobi:
                break
        if not rep.jacobi:
            break

    chain = g.filtration
    if chain[0] != Subspace.whole(n):
        rep.filtration = False
        rep.filtration_witness = {"reason": "F_1 is not the whole algebra", "levels": (1,)}
        return rep
    for lvl in range(1, len(chain)):
        if not chain[lvl] <= chain[lvl - 1]:
            rep.filtration = False
            rep.filtration_witness = {"reason": "chain is not descending", "levels": (lvl, lvl + 1)}
            return rep
    L = len(chain)
    for p in range(1, L + 1):
        for q in range(p, L + 1):
            target = g.level(p + q)
            for a, ra in enumerate(g.level(p).rows):
                for b, rb in enumerate(g.level(q).rows):
                    if not target.contains(g.bracket_coords(ra, rb)):
                        rep.filtration = False
                        rep.filtration_witness = {
                            "reason": "bracket leaves F_(n+m)",
                            "levels": (p, q),
                            "pair": (a, b),
                        }
                        return rep
    return rep


# -- adapted bases -----------------------------------------------------------

def adapted_frame(g: LieAlgebra) -> tuple[LieAlgebra, tuple | None]:
    """An isomorphic copy of ``g`` whose basis is adapted to its filtration.

    Returns ``(h, P)`` where row ``j`` of ``P`` gives the new basis vector
    ``j`` in the coordinates of ``g``.  ``P`` is None when ``g`` is already
    adapted, in which case ``h is g``.
    """
    if g.is_adapted:
        return g, None
    if g.depth is None:
        raise ValueError("filtration never reaches zero; no finite adapted basis")
    chain = g.filtration
    chosen: list[la.Vector] = []
    degrees: list[int] = []
    for n in range(len(chain) - 1, 0, -1):
        span = Subspace(chosen, g.dim)
        for row in chain[n - 1].rows:
            if not span.contains(row):
                chosen.append(row)
                degrees.append(n)
                span = Subspace(chosen, g.dim)
    order = sorted(range(len(chosen)), key=lambda t: (degrees[t], t))
    P = tuple(chosen[t] for t in order)
    Pinv_cols = la.inverse(la.transpose(P))

    def to_new(v):
        return la.mat_vec(Pinv_cols, v)

    brackets = {}
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            brackets[(i, j)] = to_new(g.bracket_coords(P[i], P[j]))
    filt = [[to_new(r) for r in lvl.rows] for lvl in chain]
    labels = tuple(f"f{i + 1}" for i in range(g.dim))
    return LieAlgebra(g.dim, brackets, labels, filt), P


# -- constructions -----------------------------------------------------------

def extend_by_polynomial_filtration(g: LieAlgebra, N: int) -> LieAlgebra:
    """The truncated loop algebra g ⊗ h·Q[h] / (h^(N+1)).

    Basis vector ``e_i h^k`` sits at index ``(k - 1) * dim + i`` and
    ``F_k`` is spanned by the powers ``h^k .. h^N``.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    d = g.dim
    D = N * d
    brackets = {}
    for k1 in range(1, N + 1):
        for k2 in range(1, N + 1 - k1):
            k = k1 + k2
            for i in range(d):
                for j in range(d):
                    a, b = (k1 - 1) * d + i, (k2 - 1) * d + j
                    if a >= b:
                        continue
                    vec = [Fraction(0)] * D
                    for t, c in g.bracket_basis(i, j):
                        vec[(k - 1) * d + t] = c
                    brackets[(a, b)] = tuple(vec)
    labels = tuple(
        f"{g.labels[i]}h" if k == 1 else f"{g.labels[i]}h^{k}"
        for k in range(1, N + 1)
        for i in range(d)
    )
    filt = [[la.unit(D, t) for t in range((k - 1) * d, D)] for k in range(1, N + 2)]
    return LieAlgebra(D, brackets, labels, filt)
