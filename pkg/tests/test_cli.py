import csv
import io
import json
from pathlib import Path

import pytest

from matgen.circulant import canonical_model
from matgen.cli import main

GOLDEN = Path(__file__).parent / "golden" / "corpus.json"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def test_check_generates(tmp_path, capsys):
    path = write(tmp_path, "pair.json", {"A": [[0, 1, 0], [0, 0, 1], [1, 0, 0]], "B": [[1, 0, 0], [0, 0, 0], [0, 0, 0]]})
    code, out = run(capsys, "check", "--input", path)
    assert code == 0 and json.loads(out)["verdict"] == "generates"


def test_check_failing_verdict_still_exits_zero(tmp_path, capsys):
    path = write(tmp_path, "pair.json", {"A": [[1, 0], [0, 1]], "B": [[2, 0], [0, 2]]})
    code, out = run(capsys, "check", "--input", path)
    assert code == 0 and json.loads(out)["verdict"] == "fails"


@pytest.mark.parametrize("content", ["{not json", json.dumps({"A": [[1, 2]], "B": 3}), json.dumps([1, 2])])
def test_malformed_input(tmp_path, capsys, content):
    path = write(tmp_path, "bad.json", content)
    assert run(capsys, "check", "--input", path)[0] == 1


def test_unknown_subcommand(capsys):
    assert main(["frobnicate"]) == 1


def test_pell(capsys):
    code, out = run(capsys, "pell", "--c", "1", "--count", "3")
    sols = [(int(s["a"]), int(s["b"])) for s in json.loads(out)["solutions"]]
    assert code == 0 and (1, 1) in sols and (2, 1) in sols


def test_resource_cap(capsys):
    assert run(capsys, "density", "fq", "--n", "3", "--q", "5", "--exhaustive")[0] == 2
    assert run(capsys, "--max-degree", "6", "present", "rank", "--n", "2", "--L", "9")[0] == 2


def test_seed_required(capsys):
    assert run(capsys, "density", "g2z", "--k", "3", "--samples", "100")[0] == 1
    assert run(capsys, "msl", "--survey", "--n", "2", "--p", "3")[0] == 1


def test_density_csv(capsys):
    code, out = run(capsys, "--format", "csv", "density", "fq", "--n", "2", "--q", "7", "--samples", "300", "--seed", "42")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 1 and rows[0]["trials"] == "300"


def test_density_reports_are_stable(capsys):
    a = run(capsys, "density", "g2z", "--k", "5", "--samples", "800", "--seed", "3")[1]
    b = run(capsys, "density", "g2z", "--k", "5", "--samples", "800", "--seed", "3", "--shards", "2")[1]
    assert a == b


def test_member_certificate(capsys):
    code, out = run(capsys, "present", "member", "--variant", "troika", "--n", "3", "--L", "8", "--target", "y*x^2*y")
    rep = json.loads(out)
    assert code == 0 and rep["member"] and rep["certificate"]["terms"]


def test_relator_file(tmp_path, capsys):
    path = write(tmp_path, "rels.txt", "x^2 - 1\nx^2*y + x*y*x - 1\ny*x*y\n")
    code, out = run(capsys, "present", "rank", "--n", "2", "--relators", path, "--L", "6")
    assert code == 0 and json.loads(out)["free_rank"] == 4


def test_rep_canonicalize(tmp_path, capsys):
    X1, Y1 = canonical_model(2, 2, 1)
    path = write(tmp_path, "rep.json", {"X1": X1.to_rows(), "Y1": Y1.to_rows()})
    code, out = run(capsys, "rep", "canonicalize", "--input", path, "--n", "2")
    rep = json.loads(out)
    assert code == 0 and (rep["k"], rep["r"]) == (2, 1)


def test_circulant_y1(capsys):
    code, out = run(capsys, "circulant", "units", "--n", "5", "--bound", "1")
    units = [u for u in json.loads(out)["units"] if not u["trivial"]]
    c, d = units[0]["c"], units[0]["d"]
    code, out = run(capsys, "circulant", "y1", "--c=" + ",".join(map(str, c)), "--d=" + ",".join(d))
    assert code == 0 and json.loads(out)["ok"]


def test_corpus_matches_golden(capsys):
    code, out = run(capsys, "corpus", "--golden", str(GOLDEN))
    rep = json.loads(out)
    assert code == 0 and rep["ok"] and rep["golden_match"]
    assert rep["count"] == len(json.loads(GOLDEN.read_text())["entries"])


def test_block_file_formats(tmp_path, capsys):
    per_block = {
        "n": 5,
        "blocks": [
            {"n": 2, "A": [[0, 1], [1, 0]], "B": [[1, 0], [0, 0]]},
            {"n": 3, "A": [[0, 1, 0], [0, 0, 1], [1, 0, 0]], "B": [[1, 0, 0], [0, 0, 0], [0, 0, 0]]},
        ],
    }
    code, out = run(capsys, "check", "--input", write(tmp_path, "b1.json", per_block))
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "generates" and rep["ring"] == "M_2(ZZ) + M_3(ZZ)"
    sizes_only = {"A": [[0, 1], [1, 0]], "B": [[1, 0], [0, 0]], "blocks": [{"n": 1}, {"n": 1}]}
    code, out = run(capsys, "check", "--input", write(tmp_path, "b2.json", sizes_only))
    assert code == 1


def test_g2_actions(tmp_path, capsys):
    path = write(tmp_path, "p.json", {"A": [[1, 1], [1, 0]], "B": [[0, 0], [1, 0]]})
    code, out = run(capsys, "g2", "check", "--input", path)
    assert code == 0 and json.loads(out)["check"]["generates"]
    code, out = run(capsys, "g2", "solve", "--c", "2", "--count", "3", "--emit-pairs")
    sols = json.loads(out)["solutions"]
    assert code == 0 and len(sols) == 3 and all(s["generates"] and "A" in s for s in sols)
