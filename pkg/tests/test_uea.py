import random
from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from oracles import FreeNilpotentOracle, nc_add, nc_exp, nc_mul, nc_scale, rand_q, rand_vec
from rbint.fixtures import heisenberg, heisenberg_rb
from rbint.free_lie import build_free_nilpotent
from rbint.lie_core import LieAlgebra
from rbint.rota_baxter import LinearOperator, RBLieAlgebra
from rbint.uea import UEA, NotGroupLike

half = Fraction(1, 2)


def pbw_monomials(U):
    out = []
    for length in range(U.N + 1):
        for m in combinations_with_replacement(range(U.g.dim), length):
            if U.degree(m) <= U.N:
                out.append(m)
    return out


def random_uea(U, rng, terms=4, constant=None):
    monos = pbw_monomials(U)
    d = {m: rand_q(rng) for m in rng.sample(monos, min(terms, len(monos)))}
    if constant is not None:
        d[()] = constant
    return U.element(d)


@pytest.fixture
def heis():
    src = heisenberg_rb()
    U = UEA(src.algebra, R=src.R)
    return src, U


class TestProduct:
    def test_examples(self, heis):
        _, U = heis
        e1, e2, e3 = (U.monomial((i,)) for i in range(3))
        assert U.N == 2
        assert e2 * e1 == U.monomial((0, 1)) - e3
        a = U.monomial((0, 1)) + e3 * 3
        assert U.one() * a == a and a * U.one() == a
        assert (e1 * U.monomial((0, 1))).terms == {}

    def test_word_straightening(self, heis):
        _, U = heis
        assert U.word([1, 0]) == U.monomial((0, 1)) - U.monomial((2,))
        with pytest.raises(ValueError):
            U.monomial((1, 0))

    @pytest.mark.parametrize("name", ["heisenberg", "filiform4_split", "free2_4_split"])
    def test_associative_and_filtered(self, cat, name):
        src = cat[name]
        U = UEA(src.algebra)
        rng = random.Random(1)
        for _ in range(15):
            a, b, c = (random_uea(U, rng) for _ in range(3))
            assert (a * b) * c == a * (b * c)
            ab = a * b
            lo = min(U.degree(m) for m in a.terms) + min(U.degree(m) for m in b.terms) if a.terms and b.terms else 0
            assert all(U.degree(m) >= lo for m in ab.terms)

    @pytest.mark.parametrize("k,c", [(2, 3), (2, 4), (3, 3)])
    def test_free_nilpotent_matches_tensor_algebra(self, k, c):
        # U of a free nilpotent algebra modulo F_(c+1) is the free associative
        # algebra truncated above word length c
        g = build_free_nilpotent(k, c)
        orc = FreeNilpotentOracle(g.labels, c)
        U = UEA(g)

        def to_poly(u):
            out = {}
            for m, coef in u.terms.items():
                p = {(): Fraction(1)}
                for i in m:
                    p = nc_mul(p, orc.polys[i], c)
                out = nc_add(out, nc_scale(coef, p))
            return out

        rng = random.Random(k * 10 + c)
        for _ in range(10):
            a, b = random_uea(U, rng, 5), random_uea(U, rng, 5)
            assert to_poly(a * b) == nc_mul(to_poly(a), to_poly(b), c)
            x = g.element(rand_vec(rng, g.dim))
            assert to_poly(U.exp(x)) == nc_exp(orc.to_poly(x.coords), c)


class TestCoproduct:
    def test_examples(self, heis):
        _, U = heis
        one, e1, e2 = U.one(), U.monomial((0,)), U.monomial((1,))
        assert U.coproduct(e1) == U.tensor(e1, one) + U.tensor(one, e1)
        e12 = U.monomial((0, 1))
        expected = U.tensor(e12, one) + U.tensor(e1, e2) + U.tensor(e2, e1) + U.tensor(one, e12)
        assert U.coproduct(e12) == expected

    def test_multiplicative(self, cat):
        src = cat["filiform4_split"]
        U = UEA(src.algebra)
        rng = random.Random(4)
        for _ in range(10):
            a, b = random_uea(U, rng), random_uea(U, rng)
            lhs = U.coproduct(a * b)
            Da, Db = U.coproduct(a), U.coproduct(b)
            rhs = U.tensor_product(Da, Db)
            assert lhs == rhs


class TestExpLog:
    def test_examples(self, heis):
        src, U = heis
        h = src.algebra
        assert U.exp(h.basis(2)) == U.one() + U.monomial((2,))
        assert U.exp(h.zero()) == U.one()
        assert U.exp(h.basis(0)) == U.one() + U.monomial((0,)) + U.monomial((0, 0)) * half
        assert U.log(U.one()).is_zero()
        assert U.log(U.one() + U.monomial((2,))) == h.basis(2)

    def test_roundtrips_and_group_like(self, cat):
        rng = random.Random(8)
        for name, src in cat.items():
            g = src.algebra
            U = UEA(g)
            for _ in range(5):
                x = g.element(rand_vec(rng, g.dim))
                ex = U.exp(x)
                assert U.is_group_like(ex), name
                assert U.coproduct(ex) == U.tensor(ex, ex)
                assert U.log(ex) == x
                assert U.exp(U.log(ex * U.exp(x))) == ex * U.exp(x)

    def test_not_group_like(self, heis):
        _, U = heis
        with pytest.raises(NotGroupLike):
            U.log(U.monomial((0,)))
        with pytest.raises(NotGroupLike):
            U.log(U.one() + U.monomial((0, 0)))


class TestLift:
    def test_examples(self, heis):
        src, U = heis
        h = src.algebra
        assert U.lift(U.one()) == U.one()
        # R(e1)R(e1) - R([R e1, e1]) with [e2, e1] = -e3 and R(-e3) = e3
        assert U.lift(U.monomial((0, 0))) == U.monomial((1, 1)) - U.monomial((2,))

    def test_square_formula(self, cat):
        rng = random.Random(2)
        for name, src in cat.items():
            g, R = src.algebra, src.R
            U = UEA(g, R=R)
            for _ in range(5):
                x = g.element(rand_vec(rng, g.dim))
                u = U.from_lie(x)
                rx = U.from_lie(R(x))
                expected = rx * rx - U.from_lie(R(g.bracket(R(x), x)))
                assert U.lift(u * u) == expected, name

    def test_star_homomorphism_and_coalgebra(self, cat):
        rng = random.Random(6)
        for name in ("heisenberg", "filiform3_split", "free2_3_split", "free2_4_minus_id"):
            src = cat[name]
            U = UEA(src.algebra, R=src.R)
            L = U.lift_rb()
            for _ in range(8):
                a, b = random_uea(U, rng), random_uea(U, rng)
                assert L(U.star_product(a, b)) == L(a) * L(b), name
                assert U.coproduct(L(a)) == U.coproduct(a).map(L), name

    def test_lift_of_exp_star(self, cat):
        rng = random.Random(9)
        for name, src in cat.items():
            U = UEA(src.algebra, R=src.R)
            for _ in range(3):
                x = src.algebra.element(rand_vec(rng, src.algebra.dim))
                assert U.lift(U.exp_star(x)) == U.exp(src.R(x)), name

    def test_words_before_straightening(self, cat):
        # apply the recursion to an unsorted word e_j (e_i ...) and compare
        # with lifting the straightened word
        src = cat["filiform4_split"]
        U = UEA(src.algebra, R=src.R)
        g, R = src.algebra, src.R
        for j in range(g.dim):
            for i in range(j):
                word = U.word([j, i])
                Rj = U.from_lie(R(g.basis(j)))
                ei = U.monomial((i,))
                direct = Rj * U.lift(ei) - U.lift(U.commutator(Rj, ei))
                assert U.lift(word) == direct


class TestStar:
    def test_examples(self, heis):
        src, U = heis
        e1, e2, e3 = (U.monomial((i,)) for i in range(3))
        assert U.star_product(e1, e2) == U.monomial((0, 1))
        assert U.star_product(e2, e1) == U.monomial((0, 1)) - e3
        assert U.star_product(U.one(), e1 + e3) == e1 + e3
        h = src.algebra
        assert U.exp_star(h.zero()) == U.one()
        assert U.exp_star(h.basis(0)) == U.one() + e1 + U.monomial((0, 0)) * half - e3 * half

    def test_associative_and_roundtrip(self, cat):
        rng = random.Random(12)
        for name in ("heisenberg", "filiform4_split", "free2_4_split"):
            src = cat[name]
            U = UEA(src.algebra, R=src.R)
            for _ in range(8):
                a, b, c = (random_uea(U, rng) for _ in range(3))
                assert U.star_product(U.star_product(a, b), c) == U.star_product(a, U.star_product(b, c))
                x = src.algebra.element(rand_vec(rng, src.algebra.dim))
                assert U.log_star(U.exp_star(x)) == x

    def test_needs_operator(self):
        U = UEA(heisenberg())
        with pytest.raises(ValueError):
            U.star_product(U.one(), U.one())


class TestTruncation:
    def test_non_nilpotent_rejected(self):
        with pytest.raises(ValueError, match="never reaches zero"):
            UEA(LieAlgebra(2, {(0, 1): (1, 0)}))

    def test_deeper_truncation_agrees_on_lie_part(self):
        src = heisenberg_rb()
        U2, U4 = UEA(src.algebra, R=src.R), UEA(src.algebra, N=4, R=src.R)
        x = src.algebra.element([2, 3, 5])
        assert U2.log(U2.lift(U2.exp(x))) == U4.log(U4.lift(U4.exp(x)))

    def test_non_adapted_basis(self):
        # Heisenberg in the basis a = e1, b = e2, c = e2 + e3
        skew = LieAlgebra(
            3,
            {(0, 1): (0, -1, 1), (0, 2): (0, -1, 1)},
            filtration_spec=[[(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, -1, 1)], []],
        )
        U = UEA(skew)
        x, y = skew.basis(0), skew.basis(1)
        # x * y = x + y + 1/2 [x, y] by the Heisenberg BCH formula
        assert U.log(U.exp(x) * U.exp(y)) == x + y + skew.bracket(x, y) * half


class TestSerialization:
    def test_roundtrip_canonical(self, heis):
        _, U = heis
        u = U.exp(U.g.element([1, -2, Fraction(1, 3)]))
        data = U.serialize(u)
        assert [d["monomial"] for d in data] == [[], [0], [1], [2], [0, 0], [0, 1], [1, 1]]
        assert U.deserialize(data) == u
        assert U.deserialize(U.serialize(u, base=1), base=1) == u

    def test_rejects_unsorted(self, heis):
        _, U = heis
        with pytest.raises(ValueError):
            U.deserialize([{"monomial": [1, 0], "coeff": "1"}])
