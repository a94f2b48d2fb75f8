"""Command-line interface.

Every command reads one algebra definition file and writes line-delimited
JSON to stdout.  Diagnostics go to stderr.  Exit status is 0 on success, 1
when a verification fails and 2 for unusable input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import serialize
from .free_lie import build_free_nilpotent
from .fixtures import builtin, rb_family
from .graded import FilteredGroup, filtered_group, graded_rb, graded_ring, verify_iso
from .group_rb import (
    BCHGroup,
    Brace,
    bch,
    closed_formula,
    find_brace_violation,
    integrate,
    magnus,
    random_element,
    uea_for,
)
from .lie_core import (
    LieAlgebra,
    extend_by_polynomial_filtration,
    format_rational,
    format_vector,
    parse_vector,
    validate,
)
from .rota_baxter import (
    LinearOperator,
    RBLieAlgebra,
    extend_operator_by_polynomial,
    filtration_witness,
    splitting_rb,
    verify_rb_weight1,
)
from .uea import NotGroupLike


class InputError(Exception):
    pass


class VerificationFailure(Exception):
    pass


def emit(record: dict, out=None) -> None:
    out = out or sys.stdout
    out.write(json.dumps(record, ensure_ascii=False) + "\n")


def _load(path: str) -> tuple[LieAlgebra, LinearOperator | None]:
    try:
        return serialize.load(path)
    except serialize.SpecError as exc:
        raise InputError(str(exc)) from exc


def _source(path: str) -> RBLieAlgebra:
    g, R = _load(path)
    if R is None:
        raise InputError(f"{path} has no rb operator")
    try:
        return RBLieAlgebra(g, R)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _vec(g: LieAlgebra, text: str, name: str):
    try:
        return g.element(parse_vector(text, g.dim))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"--{name}: {exc}") from exc


def _vectors(g: LieAlgebra, text: str, name: str) -> list:
    return [_vec(g, part, name).coords for part in text.split(";") if part.strip()]


# -- commands ----------------------------------------------------------------

def cmd_check(args) -> int:
    g, R = _load(args.file)
    rep = validate(g)
    record = {
        "command": "check",
        "dim": g.dim,
        "jacobi": "pass" if rep.jacobi else "fail",
        "filtration": "pass" if rep.filtration else "fail",
        "nilpotency_class": g.nilpotency_class,
        "depth": g.depth,
    }
    failures = []
    if not rep.jacobi:
        failures.append(f"jacobi fails on basis triple {tuple(i + 1 for i in rep.jacobi_witness)}")
    if not rep.filtration:
        failures.append(f"filtration: {rep.filtration_witness}")
    if R is None:
        record["rb"] = "absent"
    else:
        chk = verify_rb_weight1(g, R)
        record["rb"] = "pass" if chk.ok else "fail"
        if not chk.ok:
            failures.append(f"rb identity fails on basis pair {tuple(i + 1 for i in chk.witness)}")
        lvl = filtration_witness(g, R)
        record["rb_preserves_filtration"] = "pass" if lvl is None else "fail"
        if lvl is not None:
            failures.append(f"rb does not preserve F_{lvl}")
    emit(record)
    if failures:
        raise VerificationFailure("; ".join(failures))
    return 0


def cmd_bch(args) -> int:
    g, _ = _load(args.file)
    x, y = _vec(g, args.x, "x"), _vec(g, args.y, "y")
    emit({"x": format_vector(x.coords), "y": format_vector(y.coords), "bch": format_vector(bch(x, y, args.N).coords)})
    return 0


def cmd_integrate(args) -> int:
    src = _source(args.file)
    x = _vec(src.algebra, args.x, "x")
    rr = integrate(src, args.via, args.N)
    emit({"input": format_vector(x.coords), "rb_group": format_vector(rr(x).coords), "via": args.via})
    return 0


def cmd_magnus(args) -> int:
    src = _source(args.file)
    x = _vec(src.algebra, args.x, "x")
    res = magnus(src, x, args.N, args.max_degree)
    for n, om in enumerate(res.components, start=1):
        emit({"degree": n, "omega": format_vector(om.coords)})
    emit({"input": format_vector(x.coords), "omega": format_vector(res.total.coords),
          "r_omega": format_vector(src.R(res.total).coords)})
    return 0


def cmd_brace(args) -> int:
    g, _ = _load(args.file)
    cls = g.nilpotency_class
    emit({"seed": args.seed, "samples": args.samples, "nilpotency_class": cls})
    if cls is None or cls > 2:
        w = find_brace_violation(g, args.bound) if cls is not None else None
        msg = f"the brace law needs g^3 = 0; class is {cls}"
        if w is not None:
            msg += "; violated at x, y, z = " + " | ".join(format_vector(e.coords) for e in w)
        raise VerificationFailure(msg)
    rep = Brace(g).verify(args.samples, args.seed)
    emit({"brace": "pass" if rep.ok else "fail", "checked": rep.checked})
    if not rep.ok:
        raise VerificationFailure("violated at " + " | ".join(format_vector(e.coords) for e in rep.witness))
    return 0


def _matrix(op: LinearOperator) -> list:
    return [[format_rational(c) for c in row] for row in op.matrix]


def _constants(ring: LieAlgebra) -> dict:
    out = {}
    for (i, j), vec in sorted(ring.brackets.items()):
        entries = {str(k + 1): format_rational(c) for k, c in enumerate(vec) if c}
        if entries:
            out[f"{i + 1},{j + 1}"] = entries
    return out


def cmd_grade(args) -> int:
    g, R = _load(args.file)
    if g.depth is None:
        raise InputError("the filtration never reaches zero")
    if R is None:
        gr = graded_ring(FilteredGroup(BCHGroup(g, args.N)))
        emit({"dims": gr.dims, "degrees": list(gr.degrees), "brackets": _constants(gr.ring)})
        return 0
    src = _source(args.file)
    gr = graded_rb(filtered_group(src, args.N))
    rep = verify_iso(src)
    emit({
        "dims": gr.dims,
        "degrees": list(gr.degrees),
        "brackets": _constants(gr.ring),
        "operator": _matrix(gr.operator),
        "iso": "pass" if rep.ok else "fail",
    })
    if not rep.ok:
        raise VerificationFailure(f"graded comparison failed: {rep}")
    return 0


def cmd_uea(args) -> int:
    g, R = _load(args.file)
    if args.op == "star" and R is None:
        raise InputError("the star product needs an rb operator")
    U = uea_for(g, args.N, R) if R is not None else uea_for(g, args.N)

    def element(text, name):
        if text is None:
            raise InputError(f"--op {args.op} needs --{name}")
        text = text.strip()
        if text.startswith("["):
            try:
                return U.deserialize(json.loads(text), base=1)
            except (ValueError, KeyError, TypeError) as exc:
                raise InputError(f"--{name}: {exc}") from exc
        return U.from_lie(_vec(g, text, name))

    if args.op == "exp":
        result = U.serialize(U.exp(_vec(g, args.a, "a")), base=1)
    elif args.op == "log":
        try:
            result = format_vector(U.log(element(args.a, "a")).coords)
        except NotGroupLike as exc:
            raise VerificationFailure(str(exc)) from exc
    elif args.op == "product":
        result = U.serialize(element(args.a, "a") * element(args.b, "b"), base=1)
    else:
        result = U.serialize(U.star_product(element(args.a, "a"), element(args.b, "b")), base=1)
    emit({"op": args.op, "N": U.N, "result": result})
    return 0


def _write(g: LieAlgebra, R, out: str | None) -> None:
    text = serialize.dumps(g, R)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    if args.kind == "free":
        try:
            g = build_free_nilpotent(args.gens, args.cls)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        R = rb_family(g)[args.rb] if args.rb else None
    elif args.kind == "builtin":
        try:
            src = builtin(args.name)
        except KeyError as exc:
            raise InputError(exc.args[0]) from exc
        g, R = src.algebra, src.R
    else:
        if not args.file:
            raise InputError(f"gen {args.kind} needs an input file")
        base, R0 = _load(args.file)
        if args.kind == "poly":
            g = extend_by_polynomial_filtration(base, args.levels)
            R = extend_operator_by_polynomial(R0, g) if R0 is not None else None
        else:
            if args.a is None or args.b is None:
                raise InputError("gen split needs --a and --b")
            try:
                R = splitting_rb(base, _vectors(base, args.a, "a"), _vectors(base, args.b, "b"))
            except ValueError as exc:
                raise InputError(str(exc)) from exc
            g = base
    _write(g, R, args.out)
    return 0


# -- golden vectors ----------------------------------------------------------

def _vector_record(data: dict, N, index: int, coords: str) -> dict:
    g, R = serialize.from_dict(data)
    src = RBLieAlgebra(g, R)
    x = g.element(parse_vector(coords, g.dim))
    hopf = integrate(src, "hopf", N)(x)
    res = magnus(src, x, N)
    rec = {
        "index": index,
        "input": coords,
        "hopf": format_vector(hopf.coords),
        "magnus": format_vector(src.R(res.total).coords),
        "omega": [format_vector(o.coords) for o in res.components],
    }
    cls = g.nilpotency_class
    try:
        if cls is not None and cls <= 3 and g.has_standard_filtration:
            rec["closed"] = format_vector(closed_formula(src, x, 3 if cls <= 2 else 4).coords)
    except ValueError:
        pass
    return rec


def _vector_job(job):
    return _vector_record(*job)


def vector_records(src: RBLieAlgebra, count: int, seed: int, N=None, workers: int = 1):
    rng = random.Random(seed)
    inputs = [format_vector(random_element(src.algebra, rng).coords) for _ in range(count)]
    data = serialize.to_dict(src.algebra, src.R)
    jobs = [(data, N, k, x) for k, x in enumerate(inputs)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            yield from pool.map(_vector_job, jobs)
    else:
        yield from map(_vector_job, jobs)


def _vectors_header(args, src) -> dict:
    return {"seed": args.seed, "count": args.count, "dim": src.algebra.dim, "N": args.N}


def cmd_vectors(args) -> int:
    src = _source(args.file)
    emit(_vectors_header(args, src))
    for rec in vector_records(src, args.count, args.seed, args.N, args.workers):
        emit(rec)
        if rec["hopf"] != rec["magnus"] or rec.get("closed", rec["hopf"]) != rec["hopf"]:
            raise VerificationFailure(f"integration paths disagree on vector {rec['index']}")
    return 0


def cmd_verify_vectors(args) -> int:
    src = _source(args.file)
    try:
        lines = Path(args.vectors).read_text(encoding="utf-8").splitlines()
        header = json.loads(lines[0])
        seed, count, N = header["seed"], header["count"], header.get("N")
    except (OSError, IndexError, KeyError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read vectors file: {exc}") from exc
    expected = [json.dumps(header, ensure_ascii=False)]
    expected += [json.dumps(r, ensure_ascii=False) for r in vector_records(src, count, seed, N, args.workers)]
    for k, (a, b) in enumerate(zip(lines, expected)):
        if a != b:
            raise VerificationFailure(f"record {k} differs:\n  file:     {a}\n  computed: {b}")
    if len(lines) != len(expected):
        raise VerificationFailure(f"expected {len(expected)} lines, found {len(lines)}")
    emit({"verified": count, "seed": seed})
    return 0


# -- wiring ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rbint", description="Formal integration of Rota-Baxter operators on nilpotent Lie algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help, file=True):
        sp = sub.add_parser(name, help=help)
        if file:
            sp.add_argument("file", help="algebra definition (JSON)")
        sp.add_argument("--N", type=int, default=None, help="truncation level (default: filtration depth)")
        sp.set_defaults(func=fn)
        return sp

    add("check", cmd_check, "validate the algebra and its rb operator")
    sp = add("bch", cmd_bch, "BCH product x * y")
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp = add("integrate", cmd_integrate, "evaluate the group Rota-Baxter operator")
    sp.add_argument("--x", required=True)
    sp.add_argument("--via", choices=["hopf", "magnus", "closed"], default="hopf")
    sp = add("magnus", cmd_magnus, "post-Lie Magnus components")
    sp.add_argument("--x", required=True)
    sp.add_argument("--max-degree", type=int, default=None)
    sp = add("brace", cmd_brace, "check the brace law on seeded samples")
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--bound", type=int, default=1, help="coordinate bound for the violation search")
    add("grade", cmd_grade, "associated graded Lie ring and operator")
    sp = add("uea", cmd_uea, "operations in the truncated enveloping algebra")
    sp.add_argument("--op", choices=["product", "star", "exp", "log"], required=True)
    sp.add_argument("--a", help="coordinates \"1,0,0\" or a JSON term list")
    sp.add_argument("--b")
    sp = add("gen", cmd_gen, "write an algebra definition", file=False)
    sp.add_argument("kind", choices=["free", "poly", "split", "builtin"])
    sp.add_argument("file", nargs="?", help="input algebra for poly and split")
    sp.add_argument("--gens", type=int, default=2)
    sp.add_argument("--class", dest="cls", type=int, default=2)
    sp.add_argument("--rb", choices=["zero", "minus_id", "split"])
    sp.add_argument("--levels", type=int, default=2)
    sp.add_argument("--a", help="semicolon separated vectors spanning A")
    sp.add_argument("--b", help="semicolon separated vectors spanning B")
    sp.add_argument("--name", default="heisenberg")
    sp.add_argument("--out", "-o")
    for name, fn, help in (
        ("vectors", cmd_vectors, "emit golden test vectors"),
        ("verify-vectors", cmd_verify_vectors, "recompute a vectors file and compare"),
    ):
        sp = add(name, fn, help)
        sp.add_argument("--workers", type=int, default=1)
        if name == "vectors":
            sp.add_argument("--count", type=int, default=10)
            sp.add_argument("--seed", type=int, default=0)
        else:
            sp.add_argument("vectors")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except VerificationFailure as exc:
        sys.stdout.flush()
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
