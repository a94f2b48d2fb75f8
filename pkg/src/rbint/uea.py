"""Truncated filtered universal enveloping algebras.

``UEA(g, N)`` models U(g) / F_(N+1) U(g) on the PBW basis of weakly
increasing index tuples.  A monomial's degree is the sum of the filtration
degrees of its factors, and monomials of degree above N are dropped.  This
needs a basis adapted to the filtration; when the input basis is not adapted
the algebra works internally in an adapted copy (see
:func:`rbint.lie_core.adapted_frame`) and converts Lie elements on the way in
and out.  Monomial indices always refer to that working basis, which is the
input basis whenever the input is already adapted.

With a Rota-Baxter operator attached, the same space also carries the Hopf
lift of R and the star product realising U(g_R).
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Mapping

from . import _linalg as la
from .lie_core import LieAlgebra, LieElement, adapted_frame, format_rational, parse_rational
from .rota_baxter import LinearOperator

Monomial = tuple  # tuple[int, ...], weakly increasing


def _acc(out: dict, terms: Mapping, c=1) -> None:
    for m, a in terms.items():
        v = out.get(m, 0) + c * a
        if v:
            out[m] = v
        else:
            out.pop(m, None)


def monomial_key(m: Monomial):
    return (len(m), m)


class NotGroupLike(ValueError):
    pass


class UEAElement:
    """Immutable sparse combination of PBW monomials."""

    __slots__ = ("terms", "uea")

    def __init__(self, terms: Mapping, uea: UEA):
        self.terms = {m: Fraction(c) for m, c in terms.items() if c}
        self.uea = uea

    def _same(self, other):
        if not isinstance(other, UEAElement):
            return False
        if other.uea is not self.uea:
            raise ValueError("elements belong to different enveloping algebras")
        return True

    def __add__(self, other):
        if not self._same(other):
            return NotImplemented
        out = dict(self.terms)
        _acc(out, other.terms)
        return UEAElement(out, self.uea)

    def __sub__(self, other):
        if not self._same(other):
            return NotImplemented
        out = dict(self.terms)
        _acc(out, other.terms, -1)
        return UEAElement(out, self.uea)

    def __neg__(self):
        return UEAElement({m: -c for m, c in self.terms.items()}, self.uea)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UEAElement({m: c * other for m, c in self.terms.items()}, self.uea)
        if self._same(other):
            return self.uea.product(self, other)
        return NotImplemented

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self * c
        return NotImplemented

    def __eq__(self, other):
        return isinstance(other, UEAElement) and other.uea is self.uea and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def counit(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def coeff(self, m: Iterable[int]) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: monomial_key(t[0]))

    def __repr__(self):
        if not self.terms:
            return "0"
        labels = self.uea.work.labels
        parts = []
        for m, c in self.sorted_terms():
            word = "*".join(labels[i] for i in m) or "1"
            parts.append(f"{format_rational(c)}*{word}" if c != 1 else word)
        return " + ".join(parts)


class TensorElement:
    """Sparse element of U ⊗ U truncated at total degree N."""

    __slots__ = ("terms", "uea")

    def __init__(self, terms: Mapping, uea: UEA):
        self.terms = {k: Fraction(c) for k, c in terms.items() if c}
        self.uea = uea

    def __eq__(self, other):
        return isinstance(other, TensorElement) and other.uea is self.uea and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        _acc(out, other.terms)
        return TensorElement(out, self.uea)

    def __sub__(self, other):
        out = dict(self.terms)
        _acc(out, other.terms, -1)
        return TensorElement(out, self.uea)

    def map(self, f: Callable[[UEAElement], UEAElement]) -> TensorElement:
        """Apply ``f ⊗ f``."""
        U = self.uea
        out: dict = {}
        cache: dict = {}
        for (a, b), c in self.terms.items():
            for m in (a, b):
                if m not in cache:
                    cache[m] = f(U.monomial(m)).terms
            for ma, ca in cache[a].items():
                da = U.degree(ma)
                for mb, cb in cache[b].items():
                    if da + U.degree(mb) <= U.N:
                        _acc(out, {(ma, mb): c * ca * cb})
        return TensorElement(out, U)

    def __repr__(self):
        return f"TensorElement({len(self.terms)} terms)"


class UEA:
    """U(g) / F_(N+1) U(g) for a filtered nilpotent Lie algebra g.

    ``N`` defaults to the depth of the filtration, the smallest N with
    F_(N+1) g = 0, which is the nilpotency class for the standard filtration.
    """

    def __init__(self, g: LieAlgebra, N: int | None = None, R: LinearOperator | None = None):
        if g.depth is None:
            raise ValueError(
                "the filtration of g never reaches zero; use a nilpotent algebra "
                "or extend_by_polynomial_filtration"
            )
        self.g = g
        self.work, self._P = adapted_frame(g)
        if self._P is not None:
            self._Pinv_cols = la.inverse(la.transpose(self._P))
        self.N = g.depth if N is None else int(N)
        if self.N < 1:
            raise ValueError("truncation level must be at least 1")
        self.degrees = tuple(int(d) for d in self.work.basis_degrees)
        self._lmul_memo: dict = {}
        self._mmul_memo: dict = {}
        self._lift_memo: dict = {}
        self._star_memo: dict = {}
        self.R = None
        self._R_images: list[dict] = []
        if R is not None:
            self.attach(R)

    # -- coordinates --------------------------------------------------------
    def to_work(self, v) -> la.Vector:
        return tuple(v) if self._P is None else la.mat_vec(self._Pinv_cols, v)

    def from_work(self, v) -> la.Vector:
        return tuple(v) if self._P is None else la.combine(v, self._P, self.g.dim)

    def attach(self, R: LinearOperator) -> None:
        if R.home.dim != self.g.dim:
            raise ValueError("operator shape does not match the algebra")
        self.R = R
        # images of the working basis, in working coordinates
        imgs = []
        for j in range(self.g.dim):
            src = la.unit(self.g.dim, j) if self._P is None else self._P[j]
            w = self.to_work(R.apply(src))
            imgs.append({(k,): c for k, c in enumerate(w) if c and self.degrees[k] <= self.N})
        self._R_images = imgs
        self._lift_memo = {}
        self._star_memo = {}

    # -- construction -------------------------------------------------------
    def degree(self, m: Monomial) -> int:
        return sum(self.degrees[i] for i in m)

    def element(self, terms: Mapping) -> UEAElement:
        return UEAElement({tuple(m): c for m, c in terms.items() if self.degree(tuple(m)) <= self.N}, self)

    def one(self) -> UEAElement:
        return UEAElement({(): 1}, self)

    def zero(self) -> UEAElement:
        return UEAElement({}, self)

    def monomial(self, m: Iterable[int]) -> UEAElement:
        m = tuple(m)
        if list(m) != sorted(m):
            raise ValueError("PBW monomials must be weakly increasing; use word() instead")
        return UEAElement({m: 1} if self.degree(m) <= self.N else {}, self)

    def word(self, letters: Iterable[int]) -> UEAElement:
        """Product of generators in the given order, straightened to PBW form."""
        out = self.one()
        for i in reversed(tuple(letters)):
            out = UEAElement(self._lmul_elem(i, out.terms), self)
        return out

    def from_lie(self, x: LieElement) -> UEAElement:
        if x.home is not self.g:
            raise ValueError("element does not belong to this algebra")
        w = self.to_work(x.coords)
        return UEAElement({(k,): c for k, c in enumerate(w) if c and self.degrees[k] <= self.N}, self)

    def to_lie(self, u: UEAElement) -> LieElement:
        """The Lie element with the same generator coefficients; u must be primitive."""
        bad = [m for m in u.terms if len(m) != 1]
        if bad:
            raise NotGroupLike(
                f"element has non-primitive components {sorted(bad, key=monomial_key)[:3]}; "
                "the truncation level may be too small"
            )
        w = [Fraction(0)] * self.g.dim
        for (k,), c in u.terms.items():
            w[k] = c
        return LieElement(self.from_work(w), self.g)

    # -- products -----------------------------------------------------------
    def _lmul(self, j: int, m: Monomial) -> dict:
        """e_j · m for a PBW monomial m."""
        key = (j, m)
        memo = self._lmul_memo
        if key in memo:
            return memo[key]
        if self.degrees[j] + self.degree(m) > self.N:
            out = {}
        elif not m or j <= m[0]:
            out = {(j,) + m: Fraction(1)}
        else:
            # e_j e_i rest = e_i (e_j rest) + [e_j, e_i] rest
            i, rest = m[0], m[1:]
            out = {}
            for t, c in self._lmul(j, rest).items():
                _acc(out, self._lmul(i, t), c)
            for k, c in self.work.bracket_basis(j, i):
                _acc(out, self._lmul(k, rest), c)
        memo[key] = out
        return out

    def _lmul_elem(self, j: int, terms: Mapping) -> dict:
        out: dict = {}
        for m, c in terms.items():
            _acc(out, self._lmul(j, m), c)
        return out

    def _mmul(self, a: Monomial, b: Monomial) -> dict:
        key = (a, b)
        memo = self._mmul_memo
        if key in memo:
            return memo[key]
        if self.degree(a) + self.degree(b) > self.N:
            out = {}
        elif not a:
            out = {b: Fraction(1)}
        elif not b:
            out = {a: Fraction(1)}
        else:
            out = self._lmul_elem(a[0], self._mmul(a[1:], b))
        memo[key] = out
        return out

    def _prod(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        N = self.N
        ydeg = [(m, c, self.degree(m)) for m, c in y.items()]
        for a, ca in x.items():
            da = self.degree(a)
            for b, cb, db in ydeg:
                if da + db <= N:
                    _acc(out, self._mmul(a, b), ca * cb)
        return out

    def product(self, a: UEAElement, b: UEAElement) -> UEAElement:
        self._own(a, b)
        return UEAElement(self._prod(a.terms, b.terms), self)

    def _own(self, *elems):
        for e in elems:
            if e.uea is not self:
                raise ValueError("element belongs to a different enveloping algebra")

    def power(self, a: UEAElement, k: int) -> UEAElement:
        out = self.one()
        for _ in range(k):
            out = out * a
        return out

    def commutator(self, a: UEAElement, b: UEAElement) -> UEAElement:
        return a * b - b * a

    # -- coalgebra ----------------------------------------------------------
    def _delta_mono(self, m: Monomial) -> dict:
        out: dict = {}
        idx = range(len(m))
        for r in range(len(m) + 1):
            for left in combinations(idx, r):
                ls = set(left)
                key = (tuple(m[i] for i in left), tuple(m[i] for i in idx if i not in ls))
                out[key] = out.get(key, 0) + 1
        return out

    def coproduct(self, a: UEAElement) -> TensorElement:
        self._own(a)
        out: dict = {}
        for m, c in a.terms.items():
            _acc(out, self._delta_mono(m), c)
        return TensorElement(out, self)

    def tensor(self, a: UEAElement, b: UEAElement) -> TensorElement:
        out: dict = {}
        for ma, ca in a.terms.items():
            da = self.degree(ma)
            for mb, cb in b.terms.items():
                if da + self.degree(mb) <= self.N:
                    out[(ma, mb)] = out.get((ma, mb), 0) + ca * cb
        return TensorElement(out, self)

    def tensor_product(self, A: TensorElement, B: TensorElement) -> TensorElement:
        """(a ⊗ b)(c ⊗ d) = ac ⊗ bd in U ⊗ U."""
        out: dict = {}
        for (a, b), x in A.terms.items():
            for (c, d), y in B.terms.items():
                if self.degree(a) + self.degree(b) + self.degree(c) + self.degree(d) > self.N:
                    continue
                left, right = self._mmul(a, c), self._mmul(b, d)
                for ml, cl in left.items():
                    dl = self.degree(ml)
                    for mr, cr in right.items():
                        if dl + self.degree(mr) <= self.N:
                            _acc(out, {(ml, mr): x * y * cl * cr})
        return TensorElement(out, self)

    def is_group_like(self, u: UEAElement) -> bool:
        return u.counit() == 1 and self.coproduct(u) == self.tensor(u, u)

    # -- exp / log ----------------------------------------------------------
    def _exp_series(self, u: UEAElement, mul) -> UEAElement:
        out = self.one()
        term = self.one()
        for k in range(1, self.N + 1):
            term = mul(term, u) * Fraction(1, k)
            if not term:
                break
            out = out + term
        return out

    def _log_series(self, u: UEAElement, mul) -> UEAElement:
        v = u - self.one()
        out = self.zero()
        p = self.one()
        for k in range(1, self.N + 1):
            p = mul(p, v)
            if not p:
                break
            out = out + p * Fraction((-1) ** (k + 1), k)
        return out

    def _check_group_like(self, u: UEAElement) -> None:
        if u.counit() != 1:
            raise NotGroupLike(f"counit is {u.counit()}, expected 1")
        if self.coproduct(u) != self.tensor(u, u):
            raise NotGroupLike("coproduct of u differs from u ⊗ u")

    def exp(self, x: LieElement) -> UEAElement:
        return self._exp_series(self.from_lie(x), self.product)

    def log(self, u: UEAElement, check: bool = True) -> LieElement:
        self._own(u)
        if check:
            self._check_group_like(u)
        return self.to_lie(self._log_series(u, self.product))

    # -- Rota-Baxter lift ---------------------------------------------------
    def _need_R(self):
        if self.R is None:
            raise ValueError("no Rota-Baxter operator attached to this enveloping algebra")

    def _lift_mono(self, m: Monomial) -> dict:
        memo = self._lift_memo
        if m in memo:
            return memo[m]
        if not m:
            out = {(): Fraction(1)}
        else:
            rx = self._work_R(m[0])
            h = m[1:]
            if not h:
                out = dict(rx)
            else:
                # R(x h) = R(x) R(h) - R([R(x), h])
                out = self._prod(rx, self._lift_mono(h))
                comm = self._prod(rx, {h: 1})
                _acc(comm, self._prod({h: 1}, rx), -1)
                _acc(out, self._lift_terms(comm), -1)
        memo[m] = out
        return out

    def _lift_terms(self, terms: Mapping) -> dict:
        out: dict = {}
        for m, c in terms.items():
            _acc(out, self._lift_mono(m), c)
        return out

    def _work_R(self, k: int) -> dict:
        return self._R_images[k]

    def lift(self, u: UEAElement) -> UEAElement:
        """The Hopf lift of R, evaluated on a truncated element."""
        self._need_R()
        self._own(u)
        return UEAElement(self._lift_terms(u.terms), self)

    def lift_rb(self) -> Callable[[UEAElement], UEAElement]:
        self._need_R()
        return self.lift

    # -- star product -------------------------------------------------------
    def _xstar(self, x: int, terms: Mapping) -> dict:
        """x ★ c = x c + [R(x), c] for a generator x."""
        rx = self._work_R(x)
        out = self._lmul_elem(x, terms)
        _acc(out, self._prod(rx, terms))
        _acc(out, self._prod(terms, rx), -1)
        return out

    def _star_mono(self, a: Monomial, b: Monomial) -> dict:
        key = (a, b)
        memo = self._star_memo
        if key in memo:
            return memo[key]
        if self.degree(a) + self.degree(b) > self.N:
            out = {}
        elif not a:
            out = {b: Fraction(1)}
        elif len(a) == 1:
            out = self._xstar(a[0], {b: 1})
        else:
            # (x h) ★ b = x ★ (h ★ b) - [R(x), h] ★ b
            x, h = a[0], a[1:]
            out = self._xstar(x, self._star_mono(h, b))
            rx = self._work_R(x)
            comm = self._prod(rx, {h: 1})
            _acc(comm, self._prod({h: 1}, rx), -1)
            for m, c in comm.items():
                _acc(out, self._star_mono(m, b), -c)
        memo[key] = out
        return out

    def _star(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                _acc(out, self._star_mono(a, b), ca * cb)
        return out

    def star_product(self, a: UEAElement, b: UEAElement) -> UEAElement:
        self._need_R()
        self._own(a, b)
        return UEAElement(self._star(a.terms, b.terms), self)

    def exp_star(self, x: LieElement) -> UEAElement:
        self._need_R()
        return self._exp_series(self.from_lie(x), self.star_product)

    def log_star(self, u: UEAElement, check: bool = True) -> LieElement:
        self._need_R()
        self._own(u)
        if check:
            self._check_group_like(u)
        return self.to_lie(self._log_series(u, self.star_product))

    # -- serialisation ------------------------------------------------------
    def serialize(self, u: UEAElement, base: int = 0) -> list[dict]:
        """Terms in canonical order; ``base=1`` writes 1-based generator indices."""
        return [
            {"monomial": [i + base for i in m], "coeff": format_rational(c)}
            for m, c in u.sorted_terms()
        ]

    def deserialize(self, data: Iterable[Mapping], base: int = 0) -> UEAElement:
        terms: dict = {}
        for rec in data:
            m = tuple(int(i) - base for i in rec["monomial"])
            if list(m) != sorted(m) or any(not 0 <= i < self.g.dim for i in m):
                raise ValueError(f"invalid PBW monomial {list(m)}")
            c = parse_rational(rec["coeff"])
            if self.degree(m) <= self.N:
                terms[m] = terms.get(m, 0) + c
        return UEAElement(terms, self)
