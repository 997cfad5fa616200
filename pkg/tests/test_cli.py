import csv
import json

import pytest

from normedvol.cli import dispatch


def run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def hexfile(tmp_path, capsys):
    p = tmp_path / "hex.json"
    assert run(capsys, "bodies", "make", "--kind", "ngon", "--n", "6", "--out", str(p))[0] == 0
    return p


def test_verify_combinatorics(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "combinatorics")
    assert code == 0 and "38/38 passed" in out


def test_compute_mu_ht(capsys, hexfile):
    code, out, _ = run(capsys, "compute", "mu", "--body", str(hexfile), "--n", "4", "--vol", "ht")
    assert code == 0 and out.strip().startswith("1.909859317102")


def test_cross_polytope_mass(capsys, tmp_path):
    c = tmp_path / "c.json"
    run(capsys, "bodies", "make", "--kind", "cross", "--dim", "3", "--out", str(c))
    code, out, _ = run(capsys, "compute", "mu", "--body", str(c), "--n", "6", "--vol", "mass")
    assert code == 0 and out.strip().startswith("1.333333333333")


def test_witness_json_and_svg(capsys, hexfile, tmp_path):
    out_json, svg = tmp_path / "w.json", tmp_path / "w.svg"
    code, out, _ = run(capsys, "compute", "qn", "--body", str(hexfile), "--n", "4", "--seed", "9",
                       "--out", str(out_json), "--svg", str(svg))
    assert code == 0
    w = json.loads(out_json.read_text())
    assert w["exact"] and w["value"] == pytest.approx(3 ** 0.5)
    assert w["run"]["seed"] == 9 and w["run"]["rng"]
    assert 'id="witness"' in svg.read_text()


def test_search_csv(capsys, tmp_path):
    p = tmp_path / "s.csv"
    code, _, err = run(capsys, "search", "conjecture", "--samples", "20", "--seed", "42", "--csv", str(p))
    assert code == 0 and "min product" in err
    rows = list(csv.DictReader(p.open()))
    assert len(rows) == 20 and float(rows[0]["product"]) == pytest.approx(8.0)


def test_shadow_commands(capsys, tmp_path):
    s = tmp_path / "sys.json"
    s.write_text(json.dumps({"base": [[0, 0], [1, 0], [0, 1], [1, 1]], "speeds": [1, 0, 0, 0],
                             "direction": [1, 0]}))
    code, out, _ = run(capsys, "shadow", "profile", "--system", str(s), "--steps", "5")
    assert code == 0 and len(out.strip().splitlines()) == 5
    c = tmp_path / "c.json"
    c.write_text(json.dumps({"normals": [[1, 0], [0, 1]], "points": [[3, 4]]}))
    code, out, _ = run(capsys, "shadow", "cascade", "--system", str(c))
    assert code == 0 and out.startswith("reached after 2 steps")


def test_failing_suite_exit_one(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "bus-plane")
    assert code == 1 and "FAIL" in out


@pytest.mark.parametrize("argv", [
    ["compute", "qn"],
    ["verify", "--suite", "nope"],
    ["frobnicate"],
    ["compute", "qn", "--body", "x.json", "--seed", "-1"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "usage" in err


def test_bad_body(capsys, tmp_path):
    p = tmp_path / "flat.json"
    p.write_text(json.dumps({"dim": 2, "vertices": [[0, 0], [1, 1], [2, 2]]}))
    code, _, err = run(capsys, "compute", "qn", "--body", str(p), "--n", "3")
    assert code == 2 and "error" in err
    code, _, _ = run(capsys, "compute", "qn", "--body", str(tmp_path / "missing.json"), "--n", "3")
    assert code == 2


def test_asymmetric_mu_rejected(capsys, tmp_path):
    p = tmp_path / "t.json"
    run(capsys, "bodies", "make", "--kind", "simplex", "--out", str(p))
    code, _, _ = run(capsys, "compute", "mu", "--body", str(p), "--n", "3", "--vol", "bus")
    assert code == 2
