from fractions import Fraction

import pytest

from rbint.fixtures import abelian, heisenberg, heisenberg_rb
from rbint.free_lie import build_free_nilpotent
from rbint.graded import (
    FilteredGroup,
    addition_check,
    filtered_group,
    graded_lie,
    graded_rb,
    graded_ring,
    group_commutator,
    linearity_check,
    perturbation_check,
    verify_iso,
)
from rbint.group_rb import BCHGroup, integrate_rb
from rbint.lie_core import LieAlgebra, Subspace, validate
from rbint.rota_baxter import LinearOperator, RBLieAlgebra, verify_rb_weight1


def vec(*xs):
    return tuple(Fraction(x) for x in xs)


class TestCommutator:
    def test_heisenberg(self):
        h = heisenberg()
        G = BCHGroup(h)
        e1, e2, e3 = h.basis_elements()
        assert group_commutator(G, e1, e2) == e3
        x = h.element([1, 2, 3])
        assert group_commutator(G, x, x).is_zero()
        assert group_commutator(G, x, h.zero()).is_zero()

    def test_free_leading_term(self):
        g = build_free_nilpotent(2, 3)
        G = FilteredGroup(BCHGroup(g))
        x, y = g.basis(0), g.basis(1)
        c = group_commutator(G, x, y)
        # (x, y) = [x, y] + (terms in g^3)
        assert g.lcs[2].contains((c - g.bracket(x, y)).coords)


class TestGradedRing:
    def test_heisenberg(self):
        gr = graded_ring(FilteredGroup(BCHGroup(heisenberg())))
        assert gr.dims == [2, 1]
        assert gr.ring.bracket(gr.ring.basis(0), gr.ring.basis(1)) == gr.ring.basis(2)

    def test_abelian(self):
        gr = graded_ring(FilteredGroup(BCHGroup(abelian(3))))
        assert gr.dims == [3] and gr.ring.is_abelian

    def test_free_2_3_matches_own_grading(self):
        g = build_free_nilpotent(2, 3)
        gr = graded_ring(FilteredGroup(BCHGroup(g)))
        assert gr.dims == [2, 1, 2]
        # Hall bases are homogeneous, so gr of the Lie algebra is g itself
        for i in range(g.dim):
            for j in range(g.dim):
                a = gr.ring.bracket(gr.ring.basis(i), gr.ring.basis(j)).coords
                assert a == g.bracket(g.basis(i), g.basis(j)).coords

    @pytest.mark.parametrize("c", [2, 3, 4])
    def test_dims_from_lcs(self, c):
        g = build_free_nilpotent(2, c)
        gr = graded_ring(FilteredGroup(BCHGroup(g)))
        assert gr.dims == [g.lcs[n].dim - g.lcs[n + 1].dim for n in range(c)]
        assert validate(gr.ring).ok

    def test_bad_chain(self):
        # span{e1} is not normal and commutators leave F_2
        h = heisenberg()
        G = FilteredGroup(BCHGroup(h), (Subspace.whole(3), Subspace([vec(1, 0, 0)], 3), Subspace.zero(3)))
        assert not G.check()
        with pytest.raises(ValueError):
            graded_ring(G)

    def test_chain_must_end(self):
        h = heisenberg()
        with pytest.raises(ValueError):
            FilteredGroup(BCHGroup(h), (Subspace.whole(3),))

    def test_perturbation_and_addition(self, cat):
        for name in ("heisenberg", "filiform4_split", "free2_4_split"):
            G = filtered_group(cat[name])
            gr = graded_rb(G)
            assert perturbation_check(G, gr, 30, seed=1), name
            assert addition_check(G, gr, 30, seed=1), name


class TestGradedRB:
    def test_heisenberg(self):
        gr = graded_rb(filtered_group(heisenberg_rb()))
        op = gr.operator
        assert op.image(0) == vec(0, 1, 0)
        assert op.image(2) == vec(0, 0, -1)
        assert verify_rb_weight1(gr.ring, op).ok

    def test_minus_identity_and_zero(self, cat):
        for c in (3, 4):
            gm = graded_rb(filtered_group(cat[f"free2_{c}_minus_id"]))
            assert gm.operator == -LinearOperator.identity(gm.ring)
            gz = graded_rb(filtered_group(cat[f"free2_{c}_zero"]))
            assert gz.operator == LinearOperator.zero(gz.ring)

    def test_rb_identity_and_linearity(self, cat):
        for name, src in cat.items():
            G = filtered_group(src)
            gr = graded_rb(G)
            assert validate(gr.ring).ok, name
            assert verify_rb_weight1(gr.ring, gr.operator).ok, name
            assert linearity_check(G, gr, 10, seed=2), name

    def test_missing_operator(self):
        with pytest.raises(ValueError):
            graded_rb(FilteredGroup(BCHGroup(heisenberg())))


class TestIso:
    def test_all_fixtures(self, cat):
        for name, src in cat.items():
            assert verify_iso(src).ok, name

    def test_abelian_any_operator(self):
        a = abelian(3)
        R = LinearOperator([[1, 2, 3], [0, -1, 5], [Fraction(1, 2), 0, 7]], a)
        src = RBLieAlgebra(a, R)
        assert verify_iso(src).ok
        assert graded_lie(src).operator.matrix == R.matrix

    def test_non_standard_chain(self):
        # abelian algebra with F_2 = span{e2, e3}: the split R(a + b) = -b with
        # A = span{e1}, B = span{e2, e3} preserves it
        a = LieAlgebra(3, {}, filtration_spec=[[vec(1, 0, 0), vec(0, 1, 0), vec(0, 0, 1)], [vec(0, 1, 0), vec(0, 0, 1)], []])
        R = LinearOperator.from_images(a, [vec(0, 0, 0), vec(0, -1, 0), vec(0, 0, -1)])
        src = RBLieAlgebra(a, R)
        G = filtered_group(src)
        assert graded_rb(G).dims == [1, 2]
        assert verify_iso(src).ok

    def test_detects_mismatch(self):
        # a group operator perturbed in degree 1 must show up in the comparison
        src = heisenberg_rb()
        G = filtered_group(src)
        rr = integrate_rb(src)
        h = src.algebra
        bad = FilteredGroup(G.carrier, G.chain, type(rr)(src, "hopf", lambda x: rr(x) + h.element([x.coords[1], 0, 0])))
        grb = graded_rb(bad, check=False)
        grl = graded_lie(src)
        assert grb.operator != grl.operator
