"""The BCH group of a nilpotent filtered Lie algebra and integrated RB operators.

For a filtered Rota-Baxter Lie algebra (g, F, R) the group operator is

    rR(x) = log(Lift_R(exp(x)))

computed in the truncated enveloping algebra.  The same map is also
available as R(Omega(x)) through the post-Lie Magnus expansion, and through
closed low-degree formulas for small nilpotency class.
"""
from __future__ import annotations

import math
import random
import weakref
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Callable, Iterable, Sequence

from . import _linalg as la
from .lie_core import LieAlgebra, LieElement, Subspace
from .rota_baxter import LinearOperator, RBLieAlgebra, minimal_invariant_subalgebra
from .uea import UEA

_UEA_CACHE: "weakref.WeakKeyDictionary[LieAlgebra, dict]" = weakref.WeakKeyDictionary()


def uea_for(g: LieAlgebra, N: int | None = None, R: LinearOperator | None = None) -> UEA:
    """Shared truncated enveloping algebra for ``g`` (memo tables are reused)."""
    if g.depth is None:
        raise ValueError("the BCH group needs a filtration reaching zero (a nilpotent algebra)")
    N = g.depth if N is None else N
    if N < g.depth:
        raise ValueError(f"truncation level {N} is below the filtration depth {g.depth}")
    key = (N, None if R is None else R.matrix)
    slot = _UEA_CACHE.setdefault(g, {})
    if key not in slot:
        slot[key] = UEA(g, N, R)
    return slot[key]


# -- the BCH group -----------------------------------------------------------

def bch_many(*xs: LieElement, N: int | None = None) -> LieElement:
    """x_1 * x_2 * ... * x_k under the BCH law."""
    if not xs:
        raise ValueError("need at least one factor")
    g = xs[0].home
    U = uea_for(g, N)
    u = U.exp(xs[0])
    for x in xs[1:]:
        if x.home is not g:
            raise ValueError("elements live in different Lie algebras")
        u = u * U.exp(x)
    return U.log(u, check=False)


def bch(x: LieElement, y: LieElement, N: int | None = None) -> LieElement:
    """log(exp(x) exp(y)) in the truncated enveloping algebra."""
    return bch_many(x, y, N=N)


@dataclass(frozen=True, eq=False)
class BCHGroup:
    algebra: LieAlgebra
    N: int | None = None

    def __post_init__(self):
        uea_for(self.algebra, self.N)

    @property
    def identity(self) -> LieElement:
        return self.algebra.zero()

    def mul(self, *xs: LieElement) -> LieElement:
        return bch_many(*xs, N=self.N)

    @staticmethod
    def inv(x: LieElement) -> LieElement:
        return -x

    @staticmethod
    def power(x: LieElement, m) -> LieElement:
        """x^m; in a BCH group over Q this is m·x."""
        return x * Fraction(m)

    def commutator(self, x: LieElement, y: LieElement) -> LieElement:
        return self.mul(x, y, -x, -y)

    def conjugate(self, x: LieElement, y: LieElement) -> LieElement:
        """x^y = y x y^-1."""
        return self.mul(y, x, -y)


# -- integration -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RBGroupOperator:
    """Evaluator for the Rota-Baxter operator on the group (g, *)."""

    source: RBLieAlgebra
    via: str
    _fn: Callable[[LieElement], LieElement] = field(repr=False)
    N: int | None = None
    cache_size: int = 4096
    _cache: OrderedDict = field(default_factory=OrderedDict, init=False, repr=False)

    def __call__(self, x: LieElement) -> LieElement:
        if x.home is not self.source.algebra:
            raise ValueError("element does not belong to the source algebra")
        # star products and identity checks evaluate the same points repeatedly
        hit = self._cache.get(x.coords)
        if hit is not None:
            self._cache.move_to_end(x.coords)
            return hit
        out = self._fn(x)
        self._cache[x.coords] = out
        if len(self._cache) > self.cache_size:
            self._cache.popitem(last=False)
        return out

    @property
    def group(self) -> BCHGroup:
        return BCHGroup(self.source.algebra, self.N)

    def star(self, x: LieElement, y: LieElement) -> LieElement:
        """x ⋆ y = x * rR(x) * y * rR(x)^-1."""
        r = self(x)
        return bch_many(x, r, y, -r, N=self.N)

    def identity_holds(self, x: LieElement, y: LieElement) -> bool:
        """rR(x) * rR(y) == rR(x * rR(x) * y * rR(x)^-1)."""
        return bch_many(self(x), self(y), N=self.N) == self(self.star(x, y))


def _check_source(src: RBLieAlgebra, N: int | None) -> UEA:
    if not isinstance(src, RBLieAlgebra):
        raise TypeError("expected an RBLieAlgebra")
    return uea_for(src.algebra, N, src.R)


def integrate_rb(src: RBLieAlgebra, N: int | None = None) -> RBGroupOperator:
    """rR(x) = log(Lift_R(exp(x)))."""
    U = _check_source(src, N)

    def rr(x: LieElement) -> LieElement:
        return U.log(U.lift(U.exp(x)), check=False)

    return RBGroupOperator(src, "hopf", rr, N)


def _compositions(n: int, k: int):
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


@dataclass
class MagnusResult:
    components: list  # Omega_1 .. Omega_N as LieElements
    total: LieElement

    def __getitem__(self, n: int) -> LieElement:
        """Omega_n, 1-based."""
        return self.components[n - 1]


def magnus(
    src: RBLieAlgebra,
    x: LieElement,
    N: int | None = None,
    max_degree: int | None = None,
    cross_check: bool = False,
) -> MagnusResult:
    """Components of the post-Lie Magnus expansion Omega(x) = log_star(exp(x)).

    With ``cross_check`` the total is compared against log_star(exp(x)).
    """
    U = _check_source(src, N)
    g = src.algebra
    top = U.N if max_degree is None else min(max_degree, U.N)
    u = U.from_lie(x)
    omegas = [None, u]
    seq: dict = {(1,): u}

    def star_seq(idx: tuple):
        if idx not in seq:
            seq[idx] = U.star_product(star_seq(idx[:-1]), omegas[idx[-1]])
        return seq[idx]

    power = u
    for n in range(2, top + 1):
        power = power * u
        acc = power * Fraction(1, math.factorial(n))
        for k in range(2, n + 1):
            w = Fraction(1, math.factorial(k))
            for comp in _compositions(n, k):
                acc = acc - star_seq(comp) * w
        omegas.append(acc)
        seq[(n,)] = acc
    comps = [U.to_lie(o) for o in omegas[1:]]
    for n, om in enumerate(comps, start=1):
        if not g.level(n).contains(om.coords):
            raise ArithmeticError(f"Omega_{n} left F_{n}; the algebra data is inconsistent")
    total = g.zero()
    for om in comps:
        total = total + om
    if cross_check and top == U.N and U.log_star(U.exp(x), check=False) != total:
        raise ArithmeticError("Magnus recursion disagrees with log_star(exp(x))")
    return MagnusResult(comps, total)


def integrate_via_magnus(src: RBLieAlgebra, N: int | None = None) -> RBGroupOperator:
    """rR = R ∘ Omega."""
    _check_source(src, N)

    def rr(x: LieElement) -> LieElement:
        return src.R(magnus(src, x, N).total)

    return RBGroupOperator(src, "magnus", rr, N)


def _lcs_preserved(src: RBLieAlgebra, levels: Iterable[int]) -> int | None:
    lcs = src.algebra.lcs
    for i in levels:
        if i - 1 >= len(lcs):
            continue
        sub = lcs[i - 1]
        if any(not sub.contains(src.R.apply(r)) for r in sub.rows):
            return i
    return None


def closed_formula(src: RBLieAlgebra, x: LieElement, order: int) -> LieElement:
    """Closed expressions for rR when the nilpotency class is at most 2 or 3.

    order 3:  R(x) - 1/2 R([R x, x])
    order 4:  R(x - 1/2 [R x, x] + 1/12 [[R x, x], x] + 1/12 [R x, [R x, x]]
                + 1/4 [R([R x, x]), x])
    """
    g = src.algebra
    R = src.R
    cls = g.nilpotency_class
    if order not in (3, 4):
        raise ValueError("order must be 3 or 4")
    if cls is None or cls > order - 1:
        raise ValueError(f"order {order} needs nilpotency class <= {order - 1}, got {cls}")
    bad = _lcs_preserved(src, (2, 3)) if order == 4 else None
    if bad is not None:
        raise ValueError(f"R does not map g^{bad} into itself")
    b = g.bracket
    rx = R(x)
    c = b(rx, x)
    inner = x - c * Fraction(1, 2)
    if order == 4:
        inner = (
            inner
            + (b(c, x) + b(rx, c)) * Fraction(1, 12)
            + b(R(c), x) * Fraction(1, 4)
        )
    return R(inner)


def closed_operator(src: RBLieAlgebra, order: int) -> RBGroupOperator:
    return RBGroupOperator(src, "closed", lambda x: closed_formula(src, x, order))


def integrate(src: RBLieAlgebra, via: str = "hopf", N: int | None = None) -> RBGroupOperator:
    if via == "hopf":
        return integrate_rb(src, N)
    if via == "magnus":
        return integrate_via_magnus(src, N)
    if via == "closed":
        cls = src.algebra.nilpotency_class
        return closed_operator(src, 3 if cls is not None and cls <= 2 else 4)
    raise ValueError(f"unknown integration path {via!r}")


# -- braces ------------------------------------------------------------------

@dataclass
class BraceReport:
    ok: bool
    checked: int
    witness: tuple | None = None


@dataclass(frozen=True, eq=False)
class Brace:
    """(g, +, *) with * the BCH product."""

    algebra: LieAlgebra

    def add(self, x: LieElement, y: LieElement) -> LieElement:
        return x + y

    def mul(self, x: LieElement, y: LieElement) -> LieElement:
        return bch(x, y)

    def compatible(self, x: LieElement, y: LieElement, z: LieElement) -> bool:
        """x * (y + z) == (x * y) - x + (x * z)."""
        return self.mul(x, y + z) == self.mul(x, y) - x + self.mul(x, z)

    def group_axioms(self, x: LieElement, y: LieElement, z: LieElement) -> bool:
        g = self.algebra
        return (
            self.mul(self.mul(x, y), z) == self.mul(x, self.mul(y, z))
            and self.mul(x, g.zero()) == x
            and self.mul(g.zero(), x) == x
            and self.mul(x, -x) == g.zero()
        )

    def verify(self, samples: int = 200, seed: int = 0, bound: int = 5) -> BraceReport:
        rng = random.Random(seed)
        for k in range(samples):
            x, y, z = (random_element(self.algebra, rng, bound) for _ in range(3))
            if not self.compatible(x, y, z):
                return BraceReport(False, k + 1, (x, y, z))
            if not self.group_axioms(x, y, z):
                return BraceReport(False, k + 1, (x, y, z))
        return BraceReport(True, samples)


def brace(g: LieAlgebra, strict: bool = True) -> Brace:
    cls = g.nilpotency_class
    if strict and (cls is None or cls > 2):
        raise ValueError(
            f"the brace law needs g^3 = 0 (nilpotency class <= 2); this algebra has class {cls}"
        )
    return Brace(g)


def find_brace_violation(g: LieAlgebra, bound: int = 1) -> tuple | None:
    """First triple with integer coordinates in [-bound, bound] breaking the brace law."""
    B = Brace(g)
    vals = range(-bound, bound + 1)
    vectors = [g.element(v) for v in cartesian(vals, repeat=g.dim)]
    vectors.sort(key=lambda e: (sum(abs(c) for c in e.coords), [-abs(c) for c in e.coords]))
    vectors = [v for v in vectors if not v.is_zero()]
    for x in vectors:
        for y in vectors:
            for z in vectors:
                if not B.compatible(x, y, z):
                    return (x, y, z)
    return None


# -- special cases -----------------------------------------------------------

@dataclass
class SpecialCasesReport:
    closure: bool
    closure_witness: LieElement | None
    commuting_applies: bool
    commuting: bool | None
    kernel_applies: bool
    kernel: bool | None
    invariant_subalgebra: Subspace | None = None

    @property
    def ok(self) -> bool:
        return self.closure and self.commuting is not False and self.kernel is not False


def special_cases(
    src: RBLieAlgebra,
    x: LieElement,
    ys: Sequence[LieElement] | None = None,
    rr: RBGroupOperator | None = None,
) -> SpecialCasesReport:
    """Check three consequences of the integration on a given x.

    * rR(y) stays in the minimal R-invariant subalgebra L_R(x) for y in it;
    * [R x, x] = 0 implies rR(x) = R(x);
    * R x = 0 implies rR(x) = 0.
    """
    g = src.algebra
    rr = rr or integrate_rb(src)
    L = minimal_invariant_subalgebra(g, src.R, x)
    if ys is None:
        ys = [x] + [g.element(r) for r in L.rows]
    witness = None
    for y in ys:
        if not L.contains(y.coords):
            raise ValueError(f"{y} is not in L_R(x)")
        if not L.contains(rr(y).coords):
            witness = y
            break
    rx = src.R(x)
    comm_applies = g.bracket(rx, x).is_zero()
    ker_applies = rx.is_zero()
    value = rr(x) if (comm_applies or ker_applies) else None
    return SpecialCasesReport(
        closure=witness is None,
        closure_witness=witness,
        commuting_applies=comm_applies,
        commuting=(value == rx) if comm_applies else None,
        kernel_applies=ker_applies,
        kernel=value.is_zero() if ker_applies else None,
        invariant_subalgebra=L,
    )


# -- sampling ----------------------------------------------------------------

def random_rational(rng: random.Random, bound: int = 5) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_element(g: LieAlgebra, rng: random.Random, bound: int = 5) -> LieElement:
    return g.element(random_rational(rng, bound) for _ in range(g.dim))
