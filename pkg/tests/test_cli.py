import json
import shutil
import subprocess
import sys

import pytest

from leibnizkit.catalog import GOLDEN_DIR, golden_filename
from leibnizkit.cli import main
from leibnizkit.suite import run_suite


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def nf5_file(tmp_path, capsys):
    path = tmp_path / "nf5.json"
    assert run(capsys, "catalog", "--name", "nf5", "--out", str(path))[0] == 0
    return path


def test_check_nf5(capsys, nf5_file):
    code, out, _ = run(capsys, "check", str(nf5_file))
    assert code == 0
    assert out.splitlines()[0] == "leibniz: ok, nilindex 6"


def test_check_identity_violation(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dim": 2, "basis": ["e1", "e2"], "brackets": [[2, 1, [[1, "1"]]]]}))
    code, _, err = run(capsys, "check", str(path))
    assert code == 3
    assert "(2, 2, 1)" in err
    assert run(capsys, "check", str(path), "--skip-identity-check")[0] == 0


@pytest.mark.parametrize("text", ["{not json", '{"dim": 2}', '{"dim": 2, "basis": ["a", "b"], "brackets": [[1, 9, []]]}'])
def test_check_malformed_input(capsys, tmp_path, text):
    path = tmp_path / "m.json"
    path.write_text(text)
    assert run(capsys, "check", str(path))[0] == 2


def test_missing_file_is_input_error(capsys, tmp_path):
    assert run(capsys, "check", str(tmp_path / "absent.json"))[0] == 2


def test_bad_arguments(capsys):
    assert run(capsys, "catalog", "--name", "sl7")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "check", "x.json", "--seed", "minus")[0] == 2


def test_catalog_round_trip(capsys, tmp_path):
    path = tmp_path / "a.json"
    assert run(capsys, "catalog", "--name", "simple-sl2-v3", "--out", str(path))[0] == 0
    assert run(capsys, "check", str(path))[0] == 0
    code, out, _ = run(capsys, "catalog", "--name", "sl2-v3-printed")
    assert code == 0 and out == (GOLDEN_DIR / golden_filename("sl2-v3-printed")).read_text()


def test_catalog_list(capsys):
    code, out, _ = run(capsys, "catalog", "--list")
    assert code == 0 and "simple-sl2-v5" in out.split()


def test_derivations_json(capsys):
    code, out, _ = run(capsys, "derivations", "--name", "simple-sl2-v3", "--json")
    assert code == 0
    rep = json.loads(out)
    by_id = {r["id"]: r for r in rep["records"]}
    assert by_id["decomposition"]["details"]["dim_der"] == 5
    assert by_id["stabilizer"]["details"]["dim"] == 0
    assert rep["seed"] == 0xC0FFEE


def test_derivations_at_user_point(capsys):
    code, out, _ = run(capsys, "derivations", "--name", "sl2", "--point", "1,0,0", "--json")
    assert code == 0
    rec = [r for r in json.loads(out)["records"] if r["id"] == "stabilizer"][0]
    assert rec["details"]["dim"] >= 1


def test_localder(capsys, tmp_path):
    code, out, _ = run(capsys, "localder", "--name", "simple-sl2-v2", "--superspace", "--json")
    assert code == 0
    details = json.loads(out)["records"][0]["details"]
    assert details["verdict"] == "equal" and details["superspace"] == 4


def test_localder_certify(capsys, tmp_path):
    alg = tmp_path / "f1.json"
    run(capsys, "catalog", "--name", "f1-n5-zero", "--out", str(alg))
    delta = [["0"] * 5 for _ in range(5)]
    delta[3][0] = delta[3][1] = "1"
    mp = tmp_path / "d.json"
    mp.write_text(json.dumps(delta))
    code, out, _ = run(capsys, "localder", str(alg), "--certify", str(mp), "--json")
    assert code == 0
    assert json.loads(out)["records"][0]["details"]["is_derivation"] is False

    # e2 -> e1 leaves Der(L) e2 for NF-type tables
    nf = tmp_path / "nf4.json"
    run(capsys, "catalog", "--name", "nf4", "--out", str(nf))
    bad = [["0"] * 4 for _ in range(4)]
    bad[0][1] = "1"
    mp.write_text(json.dumps(bad))
    assert run(capsys, "localder", str(nf), "--certify", str(mp))[0] == 1


def test_localder_capability_bound(capsys, tmp_path):
    path = tmp_path / "big.json"
    path.write_text(json.dumps({"dim": 11, "basis": [f"e{i}" for i in range(1, 12)], "brackets": []}))
    code, _, err = run(capsys, "localder", str(path))
    assert code == 4 and "dimension 10" in err


def test_twolocal(capsys):
    code, out, _ = run(capsys, "twolocal", "--nf", "4", "--json")
    assert code == 0 and json.loads(out)["records"][0]["details"]["dim_der"] == 4
    code, _, err = run(capsys, "twolocal", "--name", "nf5")
    assert code == 2 and "(i) violated" in err


def test_aut_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "aut", "--example-6-4", "--json")
    assert code == 0
    sols = json.loads(out)["records"][0]["details"]["solutions"]
    assert sorted(tuple(s["params"]) for s in sols) == [("-1", "1", "-1"), ("1", "0", "1")]
    assert run(capsys, "aut", "--machinery-63", "3")[0] == 0
    assert run(capsys, "aut", "--nf", "4")[0] == 0
    assert run(capsys, "aut")[0] == 2


def test_aut_verify_and_decompose(capsys, tmp_path):
    ident = tmp_path / "id.json"
    ident.write_text(json.dumps([["1" if i == j else "0" for j in range(5)] for i in range(5)]))
    code, out, _ = run(capsys, "aut", "--name", "simple-sl2-v2", "--verify", str(ident), "--decompose", "--json")
    assert code == 0
    assert [r["id"] for r in json.loads(out)["records"]] == ["blocks", "verify"]
    double = tmp_path / "two.json"
    double.write_text(json.dumps([["2" if i == j else "0" for j in range(5)] for i in range(5)]))
    assert run(capsys, "aut", "--name", "simple-sl2-v2", "--verify", str(double))[0] == 1


def test_markdown_output(capsys, tmp_path):
    md = tmp_path / "r.md"
    assert run(capsys, "twolocal", "--nf", "3", "--markdown", str(md))[0] == 0
    text = md.read_text()
    assert text.startswith("# ") and "| check |" in text


def test_missing_golden_file(capsys, tmp_path):
    gdir = tmp_path / "golden"
    shutil.copytree(GOLDEN_DIR, gdir)
    (gdir / golden_filename("nf6")).unlink()
    code, _, err = run(capsys, "paper-suite", "--golden-dir", str(gdir))
    assert code == 2
    assert golden_filename("nf6") in err


def test_other_seed_gives_same_verdicts():
    # the seed-dependent checks
    only = {"C05", "C10"}.__contains__
    a = run_suite(0xC0FFEE, only=only).to_dict()
    b = run_suite(42, only=only).to_dict()
    assert [(r["id"], r["verdict"]) for r in a["records"]] == [(r["id"], r["verdict"]) for r in b["records"]]
    assert a["records"] != b["records"]
    assert b["seed"] == 42


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "leibnizkit", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("leibnizkit ")
