"""Small named algebras with Rota-Baxter operators, used by tests and the CLI."""
from __future__ import annotations

from fractions import Fraction

from . import _linalg as la
from .free_lie import build_free_nilpotent
from .lie_core import LieAlgebra
from .rota_baxter import LinearOperator, RBLieAlgebra, splitting_rb


def heisenberg() -> LieAlgebra:
    """[e1, e2] = e3."""
    return LieAlgebra(3, {(0, 1): (0, 0, 1)})


def heisenberg_rb() -> RBLieAlgebra:
    """R(e1) = e2, R(e2) = e1, R(e3) = -e3."""
    h = heisenberg()
    return RBLieAlgebra(h, LinearOperator.from_images(h, [(0, 1, 0), (1, 0, 0), (0, 0, -1)]))


def filiform(n: int) -> LieAlgebra:
    """The standard filiform algebra [e1, e_i] = e_(i+1) of dimension n (class n - 1)."""
    if n < 3:
        raise ValueError("filiform algebras start in dimension 3")
    brackets = {(0, i): la.unit(n, i + 1) for i in range(1, n - 1)}
    return LieAlgebra(n, brackets)


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra(n, {})


def first_split(g: LieAlgebra) -> LinearOperator:
    """Splitting operator for span{e1} ⊕ span{e2, ..., en}."""
    n = g.dim
    return splitting_rb(g, [la.unit(n, 0)], [la.unit(n, i) for i in range(1, n)])


def rb_family(g: LieAlgebra) -> dict:
    """R = 0, R = -id and the first-generator splitting."""
    return {
        "zero": LinearOperator.zero(g),
        "minus_id": -LinearOperator.identity(g),
        "split": first_split(g),
    }


def catalogue() -> dict:
    """Every standard fixture, keyed by a short name."""
    out = {}
    out["heisenberg"] = heisenberg_rb()
    h = heisenberg()
    out["heisenberg_split"] = RBLieAlgebra(h, first_split(h))
    for n, tag in ((4, "filiform3"), (5, "filiform4")):
        f = filiform(n)
        out[f"{tag}_split"] = RBLieAlgebra(f, first_split(f))
    for c in (3, 4):
        f = build_free_nilpotent(2, c)
        for name, R in rb_family(f).items():
            out[f"free2_{c}_{name}"] = RBLieAlgebra(f, R)
    a = abelian(3)
    out["abelian3_half"] = RBLieAlgebra(a, LinearOperator.identity(a) * Fraction(-1, 2))
    return out


def builtin(name: str) -> RBLieAlgebra:
    cat = catalogue()
    if name not in cat:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(cat)}")
    return cat[name]
