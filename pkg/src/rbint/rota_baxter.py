"""Weight-1 Rota-Baxter operators on Lie algebras.

An operator R is Rota-Baxter of weight 1 when

    [R(x), R(y)] = R([R(x), y] + [x, R(y)] + [x, y])

for all x, y.  Operators are stored as matrices acting on column vectors:
``matrix[i][j]`` is the coefficient of ``e_i`` in ``R(e_j)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import _linalg as la
from .lie_core import LieAlgebra, LieElement, Subspace, validate


@dataclass(frozen=True, eq=False)
class LinearOperator:
    matrix: tuple
    home: LieAlgebra

    def __post_init__(self):
        m = tuple(la.as_vector(row) for row in self.matrix)
        n = self.home.dim
        if len(m) != n or any(len(r) != n for r in m):
            raise ValueError(f"operator must be {n}x{n}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_images(cls, home: LieAlgebra, images: Sequence) -> LinearOperator:
        """Operator sending ``e_j`` to ``images[j]`` (elements or coordinate lists)."""
        cols = [im.coords if isinstance(im, LieElement) else la.as_vector(im) for im in images]
        return cls(la.transpose(cols), home)

    @classmethod
    def identity(cls, home: LieAlgebra) -> LinearOperator:
        return cls(la.identity(home.dim), home)

    @classmethod
    def zero(cls, home: LieAlgebra) -> LinearOperator:
        return cls(tuple(la.zero(home.dim) for _ in range(home.dim)), home)

    def apply(self, v: Sequence) -> la.Vector:
        return la.mat_vec(self.matrix, v)

    def __call__(self, x: LieElement) -> LieElement:
        if x.home is not self.home:
            raise ValueError("operator applied to an element of another algebra")
        return LieElement(self.apply(x.coords), self.home)

    def image(self, j: int) -> la.Vector:
        return tuple(row[j] for row in self.matrix)

    def __matmul__(self, other: LinearOperator) -> LinearOperator:
        return LinearOperator(la.mat_mul(self.matrix, other.matrix), self.home)

    def __neg__(self):
        return LinearOperator(tuple(tuple(-a for a in r) for r in self.matrix), self.home)

    def __mul__(self, c):
        return LinearOperator(tuple(la.scale(c, r) for r in self.matrix), self.home)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, LinearOperator) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def inverse(self) -> LinearOperator | None:
        inv = la.inverse(self.matrix)
        return None if inv is None else LinearOperator(inv, self.home)

    def on(self, home: LieAlgebra) -> LinearOperator:
        """The same matrix viewed on another algebra of equal dimension."""
        return LinearOperator(self.matrix, home)


@dataclass
class RBReport:
    ok: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def verify_rb_weight1(g: LieAlgebra, R: LinearOperator) -> RBReport:
    """Check the weight-1 identity on all basis pairs ``i < j``."""
    if R.home.dim != g.dim:
        raise ValueError("operator shape does not match the algebra")
    n = g.dim
    imgs = [R.image(j) for j in range(n)]
    for i in range(n):
        ei = la.unit(n, i)
        for j in range(i + 1, n):
            ej = la.unit(n, j)
            lhs = g.bracket_coords(imgs[i], imgs[j])
            inner = la.add(
                la.add(g.bracket_coords(imgs[i], ej), g.bracket_coords(ei, imgs[j])),
                g.bracket_coords(ei, ej),
            )
            if lhs != R.apply(inner):
                return RBReport(False, (i, j))
    return RBReport(True)


def filtration_witness(g: LieAlgebra, R: LinearOperator) -> int | None:
    """First level n with R(F_n) not inside F_n, or None."""
    for n, lvl in enumerate(g.filtration, start=1):
        if any(not lvl.contains(R.apply(r)) for r in lvl.rows):
            return n
    return None


def preserves_filtration(g: LieAlgebra, R: LinearOperator) -> bool:
    return filtration_witness(g, R) is None


@dataclass(frozen=True, eq=False)
class RBLieAlgebra:
    """A filtered Lie algebra together with a filtration-preserving RB operator."""

    algebra: LieAlgebra
    R: LinearOperator

    def __post_init__(self):
        if self.R.home is not self.algebra:
            if self.R.home.dim != self.algebra.dim:
                raise ValueError("operator shape does not match the algebra")
            object.__setattr__(self, "R", self.R.on(self.algebra))
        rep = validate(self.algebra)
        if not rep.ok:
            raise ValueError(f"algebra fails validation: {rep}")
        chk = verify_rb_weight1(self.algebra, self.R)
        if not chk.ok:
            raise ValueError(f"operator is not Rota-Baxter of weight 1; witness {chk.witness}")
        lvl = filtration_witness(self.algebra, self.R)
        if lvl is not None:
            raise ValueError(f"operator does not preserve F_{lvl}")


def descendant(g: LieAlgebra, R: LinearOperator) -> LieAlgebra:
    """The algebra g_R with bracket [x,y]_R = [R x, y] + [x, R y] + [x, y]."""
    chk = verify_rb_weight1(g, R)
    if not chk.ok:
        raise ValueError(f"operator is not Rota-Baxter of weight 1; witness {chk.witness}")
    n = g.dim
    brackets = {}
    for i in range(n):
        ei = la.unit(n, i)
        for j in range(i + 1, n):
            ej = la.unit(n, j)
            brackets[(i, j)] = la.add(
                la.add(g.bracket_coords(R.image(i), ej), g.bracket_coords(ei, R.image(j))),
                g.bracket_coords(ei, ej),
            )
    return LieAlgebra(n, brackets, g.labels, list(g.filtration))


def automorphism_witness(g: LieAlgebra, phi: LinearOperator) -> str | None:
    n = g.dim
    if phi.inverse() is None:
        return "not invertible"
    for i in range(n):
        for j in range(i + 1, n):
            lhs = phi.apply(g.bracket_coords(la.unit(n, i), la.unit(n, j)))
            rhs = g.bracket_coords(phi.image(i), phi.image(j))
            if lhs != rhs:
                return f"does not preserve the bracket on ({i}, {j})"
    lvl = filtration_witness(g, phi)
    if lvl is not None:
        return f"does not preserve F_{lvl}"
    return None


def conjugate(R: LinearOperator, phi: LinearOperator) -> LinearOperator:
    """Q = phi^-1 R phi for a filtered automorphism phi."""
    g = R.home
    problem = automorphism_witness(g, phi)
    if problem is not None:
        raise ValueError(f"phi is not a filtered automorphism: {problem}")
    return phi.inverse() @ R @ phi


def is_subalgebra(g: LieAlgebra, S: Subspace) -> bool:
    rows = S.rows
    return all(S.contains(g.bracket_coords(a, b)) for k, a in enumerate(rows) for b in rows[k + 1:])


def minimal_invariant_subalgebra(g: LieAlgebra, R: LinearOperator, x: LieElement) -> Subspace:
    """Smallest subalgebra containing x that R maps into itself."""
    S = Subspace([x.coords], g.dim)
    for _ in range(g.dim + 1):
        rows = S.rows
        new = [R.apply(r) for r in rows]
        new += [g.bracket_coords(a, b) for k, a in enumerate(rows) for b in rows[k + 1:]]
        T = S.join(new)
        if T.dim == S.dim:
            return S
        S = T
    return S


def splitting_rb(g: LieAlgebra, A: Subspace | Iterable, B: Subspace | Iterable) -> LinearOperator:
    """R(a + b) = -b for a direct sum g = A ⊕ B of subalgebras."""
    n = g.dim
    A = A if isinstance(A, Subspace) else Subspace([la.as_vector(v) for v in A], n)
    B = B if isinstance(B, Subspace) else Subspace([la.as_vector(v) for v in B], n)
    if A.dim + B.dim != n or A.join(B).dim != n:
        raise ValueError("A and B do not form a direct sum decomposition")
    for name, S in (("A", A), ("B", B)):
        if not is_subalgebra(g, S):
            raise ValueError(f"{name} is not a subalgebra")
    rows = list(A.rows) + list(B.rows)
    images = []
    for j in range(n):
        c = la.solve(rows, la.unit(n, j))
        b_part = la.combine(c[A.dim:], B.rows, n)
        images.append(la.scale(-1, b_part))
    return LinearOperator.from_images(g, images)


def extend_operator_by_polynomial(R: LinearOperator, ext: LieAlgebra) -> LinearOperator:
    """R(x h^k) = R(x) h^k on an algebra built by extend_by_polynomial_filtration."""
    d = R.home.dim
    if ext.dim % d:
        raise ValueError("extension dimension is not a multiple of the base dimension")
    N = ext.dim // d
    images = []
    for k in range(N):
        for j in range(d):
            v = [Fraction(0)] * ext.dim
            for i, c in enumerate(R.image(j)):
                v[k * d + i] = c
            images.append(v)
    return LinearOperator.from_images(ext, images)
