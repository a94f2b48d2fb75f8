import json

import pytest

from rbint import serialize
from rbint.cli import main
from rbint.fixtures import heisenberg_rb
from rbint.free_lie import build_free_nilpotent
from rbint.lie_core import LieAlgebra


@pytest.fixture
def heis_file(tmp_path):
    path = tmp_path / "heisenberg.json"
    src = heisenberg_rb()
    serialize.dump(src.algebra, src.R, path)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, [json.loads(line) for line in out.splitlines() if line.startswith("{")], err


class TestSerialize:
    def test_roundtrip(self):
        src = heisenberg_rb()
        text = serialize.dumps(src.algebra, src.R)
        g, R = serialize.loads(text)
        assert serialize.dumps(g, R) == text
        assert R.matrix == src.R.matrix
        assert json.loads(text)["brackets"] == {"1,2": {"3": "1"}}

    def test_explicit_filtration_roundtrip(self):
        g = LieAlgebra(2, {}, filtration_spec=[[(1, 0), (0, 1)], [(1, 1)], []])
        g2, R = serialize.loads(serialize.dumps(g))
        assert R is None
        assert [lvl.dim for lvl in g2.filtration] == [2, 1, 0]
        assert g2.filtration[1].rows == g.filtration[1].rows

    def test_free_labels(self):
        g = build_free_nilpotent(2, 3)
        g2, _ = serialize.loads(serialize.dumps(g))
        assert g2.labels == g.labels and g2.brackets == g.brackets

    @pytest.mark.parametrize(
        "data",
        [
            {},
            {"dim": 0},
            {"dim": 2, "brackets": {"2,1": {"1": "1"}}},
            {"dim": 2, "brackets": {"1,3": {"1": "1"}}},
            {"dim": 2, "brackets": {"1,2": {"1": 0.5}}},
            {"dim": 2, "brackets": {"1,2": {"1": "1/0"}}},
            {"dim": 2, "labels": ["a"]},
            {"dim": 2, "rb": [["1", "0"]]},
            {"dim": 2, "filtration": "lower"},
        ],
    )
    def test_malformed(self, data):
        with pytest.raises(serialize.SpecError):
            serialize.from_dict(data)


class TestCommands:
    def test_check(self, capsys, heis_file):
        code, recs, _ = run(capsys, "check", heis_file)
        assert code == 0 and recs[0]["rb"] == "pass"

    def test_check_failure(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"dim": 3, "brackets": {"1,2": {"3": "1"}}, "rb": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]}))
        code, recs, err = run(capsys, "check", str(path))
        assert code == 1 and recs[0]["rb"] == "fail"
        assert "(1, 2)" in err

    def test_integrate(self, capsys, heis_file):
        for via in ("hopf", "magnus", "closed"):
            code, recs, _ = run(capsys, "integrate", heis_file, "--x", "1,0,0", "--via", via)
            assert code == 0
            assert recs[0] == {"input": "1,0,0", "rb_group": "0,1,-1/2", "via": via}

    def test_bch(self, capsys, heis_file):
        code, recs, _ = run(capsys, "bch", heis_file, "--x", "1,0,0", "--y", "0,1,0")
        assert code == 0 and recs[0]["bch"] == "1,1,1/2"

    def test_magnus(self, capsys, heis_file):
        code, recs, _ = run(capsys, "magnus", heis_file, "--x", "1,0,0")
        assert [r.get("omega") for r in recs[:2]] == ["1,0,0", "0,0,1/2"]
        assert recs[-1]["r_omega"] == "0,1,-1/2"

    def test_uea(self, capsys, heis_file):
        code, recs, _ = run(capsys, "uea", heis_file, "--op", "star", "--a", "0,1,0", "--b", "1,0,0")
        assert recs[0]["result"] == [{"monomial": [3], "coeff": "-1"}, {"monomial": [1, 2], "coeff": "1"}]
        code, recs, _ = run(capsys, "uea", heis_file, "--op", "exp", "--a", "1,0,0")
        exp_e1 = json.dumps(recs[0]["result"])
        code, recs, _ = run(capsys, "uea", heis_file, "--op", "log", "--a", exp_e1)
        assert code == 0 and recs[0]["result"] == "1,0,0"
        code, recs, _ = run(capsys, "uea", heis_file, "--op", "product", "--a", "0,1,0", "--b", "1,0,0")
        assert recs[0]["result"] == [{"monomial": [3], "coeff": "-1"}, {"monomial": [1, 2], "coeff": "1"}]
        code, _, err = run(capsys, "uea", heis_file, "--op", "log", "--a", "1,0,0")
        assert code == 1 and "counit" in err

    def test_grade(self, capsys, heis_file):
        code, recs, _ = run(capsys, "grade", heis_file)
        assert code == 0
        assert recs[0]["dims"] == [2, 1] and recs[0]["iso"] == "pass"
        assert recs[0]["operator"] == [["0", "1", "0"], ["1", "0", "0"], ["0", "0", "-1"]]

    def test_brace(self, capsys, heis_file, tmp_path):
        code, recs, _ = run(capsys, "brace", heis_file, "--samples", "30", "--seed", "4")
        assert code == 0 and recs[0]["seed"] == 4 and recs[1]["brace"] == "pass"
        free = tmp_path / "free.json"
        assert main(["gen", "free", "--gens", "2", "--class", "3", "-o", str(free)]) == 0
        code, _, err = run(capsys, "brace", str(free))
        assert code == 1 and "g^3 = 0" in err and "violated" in err

    def test_gen(self, capsys, tmp_path, heis_file):
        out = tmp_path / "f.json"
        assert main(["gen", "free", "--gens", "2", "--class", "4", "--rb", "split", "-o", str(out)]) == 0
        g, R = serialize.load(out)
        assert g.dim == 8 and R is not None
        code, recs, _ = run(capsys, "check", str(out))
        assert code == 0
        poly = tmp_path / "p.json"
        assert main(["gen", "poly", heis_file, "--levels", "2", "-o", str(poly)]) == 0
        g, R = serialize.load(poly)
        assert g.dim == 6 and g.depth == 2
        split = tmp_path / "s.json"
        assert main(["gen", "split", heis_file, "--a", "1,0,0", "--b", "0,1,0;0,0,1", "-o", str(split)]) == 0
        code, recs, _ = run(capsys, "integrate", str(split), "--x", "1,1,0")
        assert code == 0
        assert main(["gen", "builtin", "--name", "filiform4_split", "-o", str(tmp_path / "b.json")]) == 0

    def test_vectors_replay(self, capsys, heis_file, tmp_path):
        code = main(["vectors", heis_file, "--count", "6", "--seed", "11"])
        first, _ = capsys.readouterr()
        assert code == 0
        header = json.loads(first.splitlines()[0])
        assert header["seed"] == 11
        main(["vectors", heis_file, "--count", "6", "--seed", "11", "--workers", "2"])
        parallel, _ = capsys.readouterr()
        assert parallel == first
        path = tmp_path / "v.jsonl"
        path.write_text(first)
        code, recs, _ = run(capsys, "verify-vectors", heis_file, str(path))
        assert code == 0 and recs[0]["verified"] == 6
        for line in first.splitlines()[1:]:
            rec = json.loads(line)
            assert rec["hopf"] == rec["magnus"] == rec["closed"]
        tampered = first.replace(json.loads(first.splitlines()[1])["hopf"], "0,0,0", 1)
        path.write_text(tampered)
        code, _, err = run(capsys, "verify-vectors", heis_file, str(path))
        assert code == 1 and "record 1" in err

    def test_input_errors(self, capsys, heis_file, tmp_path):
        assert run(capsys, "integrate", heis_file, "--x", "1,0")[0] == 2
        assert run(capsys, "integrate", str(tmp_path / "missing.json"), "--x", "1")[0] == 2
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert run(capsys, "check", str(bad))[0] == 2
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2
        capsys.readouterr()
        nilp = tmp_path / "solvable.json"
        nilp.write_text(json.dumps({"dim": 2, "brackets": {"1,2": {"1": "1"}}, "rb": [["0", "0"], ["0", "-1"]]}))
        code, _, err = run(capsys, "integrate", str(nilp), "--x", "1,0")
        assert code == 2 and "nilpotent" in err
