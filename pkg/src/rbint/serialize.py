"""JSON algebra definition files.

Layout (all indices 1-based, all rationals as strings)::

    {
      "dim": 3,
      "labels": ["e1", "e2", "e3"],
      "brackets": {"1,2": {"3": "1"}},
      "filtration": "standard",
      "rb": [["0", "1", "0"], ["1", "0", "0"], ["0", "0", "-1"]]
    }

``filtration`` is either ``"standard"`` (lower central series) or a list of
levels, each a list of spanning vectors.  ``rb[i][j]`` is the coefficient of
e_(i+1) in R(e_(j+1)).
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .lie_core import LieAlgebra, format_rational, format_vector, parse_rational, parse_vector
from .rota_baxter import LinearOperator


class SpecError(ValueError):
    """Malformed algebra definition."""


def _rational(value, where: str):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise SpecError(f"{where}: rationals must be strings such as \"-1/2\", got {value!r}")
    try:
        return parse_rational(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"{where}: bad rational {value!r}") from exc


def _vector(value, dim: int, where: str):
    if isinstance(value, str):
        try:
            return parse_vector(value, dim)
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"{where}: {exc}") from exc
    if not isinstance(value, list) or len(value) != dim:
        raise SpecError(f"{where}: expected {dim} coordinates")
    return tuple(_rational(c, where) for c in value)


def _index(text: str, dim: int, where: str) -> int:
    try:
        i = int(text)
    except ValueError as exc:
        raise SpecError(f"{where}: bad index {text!r}") from exc
    if not 1 <= i <= dim:
        raise SpecError(f"{where}: index {i} outside 1..{dim}")
    return i - 1


def from_dict(data: dict) -> tuple[LieAlgebra, LinearOperator | None]:
    if not isinstance(data, dict):
        raise SpecError("top level must be an object")
    dim = data.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise SpecError("dim must be a positive integer")
    labels = data.get("labels")
    if labels is None:
        labels = [f"e{i + 1}" for i in range(dim)]
    if not isinstance(labels, list) or len(labels) != dim or len(set(map(str, labels))) != dim:
        raise SpecError("labels must be a list of dim distinct strings")
    raw = data.get("brackets", {})
    if not isinstance(raw, dict):
        raise SpecError("brackets must be an object keyed by \"i,j\"")
    brackets = {}
    for key, val in raw.items():
        parts = str(key).split(",")
        if len(parts) != 2:
            raise SpecError(f"bracket key {key!r} is not of the form \"i,j\"")
        i, j = (_index(p.strip(), dim, f"bracket {key}") for p in parts)
        if i >= j:
            raise SpecError(f"bracket key {key!r} must have i < j")
        if not isinstance(val, dict):
            raise SpecError(f"bracket {key}: value must map indices to rationals")
        vec = [0] * dim
        for k, c in val.items():
            vec[_index(k, dim, f"bracket {key}")] = _rational(c, f"bracket {key}")
        brackets[(i, j)] = tuple(vec)
    filt = data.get("filtration", "standard")
    if filt != "standard":
        if not isinstance(filt, list) or not filt:
            raise SpecError("filtration must be \"standard\" or a non-empty list of levels")
        filt = [
            [_vector(v, dim, f"filtration level {n}") for v in level]
            for n, level in enumerate(filt, start=1)
        ]
    try:
        g = LieAlgebra(dim, brackets, tuple(map(str, labels)), filt)
        g.filtration  # noqa: B018 - force parsing of the chain
    except (ValueError, TypeError) as exc:
        raise SpecError(str(exc)) from exc
    R = None
    if data.get("rb") is not None:
        rows = data["rb"]
        if not isinstance(rows, list) or len(rows) != dim:
            raise SpecError(f"rb must be a {dim}x{dim} array")
        R = LinearOperator(tuple(_vector(r, dim, "rb") for r in rows), g)
    return g, R


def to_dict(g: LieAlgebra, R: LinearOperator | None = None) -> dict[str, Any]:
    brackets = {}
    for (i, j) in sorted(g.brackets):
        vec = g.brackets[(i, j)]
        entries = {str(k + 1): format_rational(c) for k, c in enumerate(vec) if c}
        if entries:
            brackets[f"{i + 1},{j + 1}"] = entries
    spec = g.filtration_spec
    if spec is None or spec == "standard":
        filt: Any = "standard"
    else:
        filt = [[format_vector(r) for r in lvl.rows] for lvl in g.filtration]
    out: dict[str, Any] = {
        "dim": g.dim,
        "labels": list(g.labels),
        "brackets": brackets,
        "filtration": filt,
    }
    if R is not None:
        out["rb"] = [[format_rational(c) for c in row] for row in R.matrix]
    return out


def dumps(g: LieAlgebra, R: LinearOperator | None = None) -> str:
    return json.dumps(to_dict(g, R), indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> tuple[LieAlgebra, LinearOperator | None]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc}") from exc
    return from_dict(data)


def load(path: str | Path) -> tuple[LieAlgebra, LinearOperator | None]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def dump(g: LieAlgebra, R: LinearOperator | None, path: str | Path) -> None:
    Path(path).write_text(dumps(g, R), encoding="utf-8")
