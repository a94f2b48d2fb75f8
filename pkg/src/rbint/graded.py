"""Associated graded Lie rings of filtered BCH groups.

Each graded piece gr_n = F_n / F_(n+1) is realized by a complement basis of
F_(n+1) inside F_n, so reducing a representative is a linear projection and
the comparison map with the graded Lie algebra is the identity on
coordinates.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import _linalg as la
from .group_rb import BCHGroup, RBGroupOperator, integrate_rb, random_rational
from .lie_core import LieAlgebra, LieElement, Subspace, validate
from .rota_baxter import LinearOperator, RBLieAlgebra, verify_rb_weight1


@dataclass
class ChainReport:
    ok: bool
    witness: dict | None = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True, eq=False)
class FilteredGroup:
    carrier: BCHGroup
    chain: tuple = None
    rb: RBGroupOperator | None = None

    def __post_init__(self):
        chain = self.algebra.filtration if self.chain is None else tuple(self.chain)
        if chain[-1].dim != 0:
            raise ValueError("the chain must end in the trivial subgroup")
        object.__setattr__(self, "chain", chain)

    @property
    def algebra(self) -> LieAlgebra:
        return self.carrier.algebra

    @property
    def depth(self) -> int:
        return next(n for n, lvl in enumerate(self.chain, start=1) if lvl.dim == 0) - 1

    def level(self, n: int) -> Subspace:
        return self.chain[min(n, len(self.chain)) - 1]

    def check(self, samples: int = 5, seed: int = 0) -> ChainReport:
        """Commutator compatibility, normality and rb-invariance of the chain."""
        g = self.algebra
        G = self.carrier
        top = len(self.chain)
        if self.chain[0].dim != g.dim:
            return ChainReport(False, {"reason": "F_1 is not the whole group"})
        for n in range(1, top + 1):
            for m in range(n, top + 1):
                target = self.level(n + m)
                for a in self.level(n).rows:
                    for b in self.level(m).rows:
                        c = G.commutator(g.element(a), g.element(b))
                        if not target.contains(c.coords):
                            return ChainReport(False, {"reason": "commutator leaves F_(n+m)", "levels": (n, m)})
        rng = random.Random(seed)
        for n in range(2, top + 1):
            lvl = self.level(n)
            probes = [g.element(r) for r in lvl.rows] + [_sample(g, lvl, rng) for _ in range(samples)]
            for x in probes:
                for i in range(g.dim):
                    if not lvl.contains(G.conjugate(x, g.basis(i)).coords):
                        return ChainReport(False, {"reason": "F_n is not normal", "level": n})
                if self.rb is not None and not lvl.contains(self.rb(x).coords):
                    return ChainReport(False, {"reason": "rb does not preserve F_n", "level": n})
        return ChainReport(True)


def _sample(g: LieAlgebra, S: Subspace, rng: random.Random, bound: int = 5) -> LieElement:
    return g.element(la.combine([random_rational(rng, bound) for _ in S.rows], S.rows, g.dim))


def group_commutator(G: FilteredGroup | BCHGroup, x: LieElement, y: LieElement) -> LieElement:
    """(x, y) = x * y * x^-1 * y^-1."""
    carrier = G.carrier if isinstance(G, FilteredGroup) else G
    return carrier.commutator(x, y)


# -- graded rings ------------------------------------------------------------

def complement_basis(big: Subspace, small: Subspace) -> tuple:
    """Echelon basis of a complement of ``small`` inside ``big``."""
    reduced = [small.reduce(r) for r in big.rows]
    return Subspace(reduced, big.n).rows


@dataclass(frozen=True, eq=False)
class GradedLieRing:
    """gr_1 ⊕ gr_2 ⊕ ... on a graded basis.

    ``ring`` is a Lie algebra whose basis vector ``i`` is the class of
    ``representatives[i]``, sitting in degree ``degrees[i]``.
    """

    components: tuple  # per degree, the complement basis in ambient coordinates
    chain: tuple
    ring: LieAlgebra
    operator: LinearOperator | None = None
    source: object = field(default=None, repr=False)

    @property
    def dims(self) -> list[int]:
        return [len(c) for c in self.components]

    @property
    def degrees(self) -> tuple:
        return tuple(n for n, comp in enumerate(self.components, start=1) for _ in comp)

    @property
    def representatives(self) -> tuple:
        return tuple(v for comp in self.components for v in comp)

    def offset(self, n: int) -> int:
        return sum(self.dims[: n - 1])

    def indices(self, n: int) -> range:
        start = self.offset(n)
        return range(start, start + self.dims[n - 1])

    def project(self, v, n: int) -> la.Vector:
        """Class of ``v`` in gr_n as graded coordinates (``v`` must lie in F_n)."""
        v = v.coords if isinstance(v, LieElement) else la.as_vector(v)
        big = _level(self.chain, n)
        if not big.contains(v):
            raise ValueError(f"representative is not in F_{n}")
        r = _level(self.chain, n + 1).reduce(v)
        comp = Subspace(self.components[n - 1], len(v))
        local = [r[p] for p in comp.pivots]
        out = [Fraction(0)] * self.ring.dim
        for k, c in zip(self.indices(n), local):
            out[k] = c
        return tuple(out)

    def bracket(self, a, b):
        return self.ring.bracket(a, b)

    def structure_constants(self) -> dict:
        return {k: v for k, v in self.ring.brackets.items() if not la.is_zero(v)}


def _level(chain: tuple, n: int) -> Subspace:
    return chain[min(n, len(chain)) - 1]


def _graded_frame(chain: tuple, depth: int) -> tuple:
    return tuple(complement_basis(_level(chain, n), _level(chain, n + 1)) for n in range(1, depth + 1))


def _assemble(chain, depth, pair_rep, op_rep=None, source=None, labels=None) -> GradedLieRing:
    """Build the graded ring from maps on representatives.

    ``pair_rep(a, b, n, m)`` returns the representative of the bracket of
    classes of ``a`` in gr_n and ``b`` in gr_m (an element of F_(n+m));
    ``op_rep(a, n)`` returns a representative of the operator image in F_n.
    """
    comps = _graded_frame(chain, depth)
    degrees = [n for n, comp in enumerate(comps, start=1) for _ in comp]
    reps = [v for comp in comps for v in comp]
    dim = len(reps)
    labels = labels or tuple(f"g{d}_{k + 1}" for k, d in enumerate(degrees))
    tmp = GradedLieRing(comps, chain, LieAlgebra(dim, {}, labels, "standard"))
    brackets = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            n, m = degrees[i], degrees[j]
            if n + m > depth:
                continue
            w = pair_rep(reps[i], reps[j], n, m)
            brackets[(i, j)] = tmp.project(w, n + m)
    grading = [
        [la.unit(dim, k) for k in range(dim) if degrees[k] >= n] for n in range(1, depth + 2)
    ]
    ring = LieAlgebra(dim, brackets, labels, grading)
    op = None
    if op_rep is not None:
        images = [tmp.project(op_rep(reps[k], degrees[k]), degrees[k]) for k in range(dim)]
        op = LinearOperator.from_images(ring, images)
    return GradedLieRing(comps, chain, ring, op, source)


def graded_ring(G: FilteredGroup, check: bool = True) -> GradedLieRing:
    """gr G with bracket induced by group commutators."""
    if check:
        rep = G.check()
        if not rep:
            raise ValueError(f"chain is not a group filtration: {rep.witness}")
    g = G.algebra

    def pair(a, b, n, m):
        return group_commutator(G, g.element(a), g.element(b)).coords

    return _assemble(G.chain, G.depth, pair, source=G)


def graded_rb(G: FilteredGroup, check: bool = True) -> GradedLieRing:
    """gr G together with the operator induced by the group RB operator."""
    if G.rb is None:
        raise ValueError("the filtered group carries no Rota-Baxter operator")
    if check:
        rep = G.check()
        if not rep:
            raise ValueError(f"chain is not an rb-invariant group filtration: {rep.witness}")
    g = G.algebra

    def pair(a, b, n, m):
        return group_commutator(G, g.element(a), g.element(b)).coords

    def op(a, n):
        return G.rb(g.element(a)).coords

    return _assemble(G.chain, G.depth, pair, op, source=G)


def graded_lie(src: RBLieAlgebra) -> GradedLieRing:
    """Associated graded of (g, [,]) with the reduced linear operator R."""
    g = src.algebra
    if g.depth is None:
        raise ValueError("filtration never reaches zero")

    def pair(a, b, n, m):
        return g.bracket_coords(a, b)

    return _assemble(g.filtration, g.depth, pair, lambda a, n: src.R.apply(a), source=src)


def filtered_group(src: RBLieAlgebra, N: int | None = None) -> FilteredGroup:
    return FilteredGroup(BCHGroup(src.algebra, N), src.algebra.filtration, integrate_rb(src, N))


# -- verification ------------------------------------------------------------

@dataclass
class IsoReport:
    ok: bool
    bracket_witness: tuple | None = None
    operator_witness: int | None = None
    jacobi: bool = True
    rb_identity: bool = True

    def __bool__(self):
        return self.ok


def verify_iso(src: RBLieAlgebra) -> IsoReport:
    """Compare gr of the RB group with gr of the RB Lie algebra.

    The comparison map sends the class of x in either object to the class of
    x, which on complement coordinates is the identity.
    """
    G = filtered_group(src)
    grG = graded_rb(G)
    grL = graded_lie(src)
    rep = IsoReport(True)
    rep.jacobi = validate(grG.ring).ok
    rep.rb_identity = verify_rb_weight1(grG.ring, grG.operator).ok
    dim = grG.ring.dim
    for i in range(dim):
        for j in range(i + 1, dim):
            if grG.ring.bracket_basis(i, j) != grL.ring.bracket_basis(i, j):
                rep.bracket_witness = (i, j)
                break
        if rep.bracket_witness:
            break
    for k in range(dim):
        if grG.operator.image(k) != grL.operator.image(k):
            rep.operator_witness = k
            break
    rep.ok = (
        rep.jacobi and rep.rb_identity and rep.bracket_witness is None and rep.operator_witness is None
    )
    return rep


@dataclass
class PerturbationReport:
    ok: bool
    checked: int
    witness: dict | None = None

    def __bool__(self):
        return self.ok


def perturbation_check(G: FilteredGroup, gr: GradedLieRing, samples: int = 100, seed: int = 0) -> PerturbationReport:
    """Classes of commutators and rb images do not depend on representatives.

    Each sample draws x in F_n, y in F_m and p in F_(n+1), q in F_(m+1), then
    compares the classes built from (x, y) and from (x*p, y*q).
    """
    g = G.algebra
    rng = random.Random(seed)
    depth = G.depth
    for k in range(samples):
        n = rng.randint(1, depth)
        m = rng.randint(1, depth)
        x = _sample(g, G.level(n), rng)
        y = _sample(g, G.level(m), rng)
        xp = G.carrier.mul(x, _sample(g, G.level(n + 1), rng))
        yq = G.carrier.mul(y, _sample(g, G.level(m + 1), rng))
        if n + m <= depth:
            a = gr.project(group_commutator(G, x, y), n + m)
            b = gr.project(group_commutator(G, xp, yq), n + m)
            if a != b:
                return PerturbationReport(False, k + 1, {"kind": "bracket", "x": x, "y": y, "degrees": (n, m)})
        if G.rb is not None:
            if gr.project(G.rb(x), n) != gr.project(G.rb(xp), n):
                return PerturbationReport(False, k + 1, {"kind": "operator", "x": x, "degree": n})
    return PerturbationReport(True, samples)


def linearity_check(G: FilteredGroup, gr: GradedLieRing, samples: int = 50, seed: int = 0) -> PerturbationReport:
    """The induced operator commutes with addition and rational multiples.

    Addition on gr_n comes from the group law and multiplication by m from
    the power x^m, which in a BCH group over Q is m·x.
    """
    g = G.algebra
    rng = random.Random(seed)
    mat = gr.operator
    for k in range(samples):
        n = rng.randint(1, G.depth)
        x = _sample(g, G.level(n), rng)
        y = _sample(g, G.level(n), rng)
        q = random_rational(rng) or Fraction(1)
        gx = gr.project(G.rb(x), n)
        if gx != mat.apply(gr.project(x, n)):
            return PerturbationReport(False, k + 1, {"kind": "matrix", "x": x})
        lhs = gr.project(G.rb(G.carrier.mul(x, y)), n)
        if lhs != la.add(gx, gr.project(G.rb(y), n)):
            return PerturbationReport(False, k + 1, {"kind": "additive", "x": x, "y": y})
        if gr.project(G.rb(G.carrier.power(x, q)), n) != la.scale(q, gx):
            return PerturbationReport(False, k + 1, {"kind": "scalar", "x": x, "m": q})
    return PerturbationReport(True, samples)


def addition_check(G: FilteredGroup, gr: GradedLieRing, samples: int = 50, seed: int = 0) -> PerturbationReport:
    """x * y and x + y have the same class in gr_n for x, y in F_n."""
    g = G.algebra
    rng = random.Random(seed)
    for k in range(samples):
        n = rng.randint(1, G.depth)
        x = _sample(g, G.level(n), rng)
        y = _sample(g, G.level(n), rng)
        if gr.project(G.carrier.mul(x, y), n) != gr.project(x + y, n):
            return PerturbationReport(False, k + 1, {"x": x, "y": y, "degree": n})
    return PerturbationReport(True, samples)
