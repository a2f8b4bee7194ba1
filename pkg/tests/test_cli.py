import json
import subprocess
import sys

import pytest

from parrylab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_expand_lehmer(capsys):
    code, out, _ = run(capsys, "expand", "--beta", "[1,1,0,-1,-1,-1,-1,-1,0,1,1]")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == "parry-lab/1"
    assert doc["pattern"] == "0.1(0^10 1 0^18 1 0^12 1 0^18 1 0^12)^w"


def test_dyg_and_classify(capsys):
    code, out, _ = run(capsys, "dyg", "--beta", "1.176280818259917")
    assert code == 0 and json.loads(out)["dyg"] == 12
    code, out, _ = run(capsys, "classify", "--beta", "x^3-x-1")
    assert code == 0 and "C1" in out


def test_mahler_expression_with_leading_minus(capsys):
    code, out, _ = run(capsys, "mahler", "--poly=-1+x+x^5")
    assert code == 0
    assert json.loads(out)["M"].startswith("1.3247179572")


def test_bounds_json(capsys):
    code, out, _ = run(capsys, "bounds", "--poly", "x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["salem_ok"] and doc["dyg"] == 12


def test_trinomial_csv(tmp_path, capsys):
    path = tmp_path / "roots.csv"
    code, out, _ = run(capsys, "trinomial", "--n", "615", "--format", "csv", "--emit", str(path))
    assert code == 0 and json.loads(out)["written"] == str(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "j,re,im,abs,arg,D_re,D_im,sector"
    assert len(lines) == 1 + 1 + 615 // 6


def test_equidist_csv(capsys):
    code, out, _ = run(capsys, "equidist", "--n", "100", "400", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "n,discrepancy,bound"


def test_constants(capsys):
    code, out, _ = run(capsys, "constants")
    doc = json.loads(out)
    assert doc["kappa"].startswith("0.171572875")
    assert doc["theta31_inv"].startswith("1.0854496")


def test_lenticulus_first_root(capsys):
    code, out, _ = run(capsys, "lenticulus", "--beta", "x^40-x^39-1", "--first-root")
    doc = json.loads(out)
    assert code == 0 and doc["n"] == 40 and doc["entries"][1]["certified"]


def test_errors(capsys):
    code, out, _ = run(capsys, "mahler", "--poly", "x^^2")
    assert code == 3 and "error" in json.loads(out)
    code, out, _ = run(capsys, "dyg", "--beta", "2.5")
    assert code == 3
    with pytest.raises(SystemExit) as exc:
        main(["nosuch"])
    assert exc.value.code == 2


def test_table1_exit_code(capsys):
    # four printed rows differ from the re-derivation, so the check reports failure
    code, out, err = run(capsys, "table1-verify")
    assert code == 1 and "23/27 rows reproduced" in err


def test_console_script_suite_subset():
    r = subprocess.run([sys.executable, "-m", "parrylab.cli", "suite", "--only", "4", "5"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert "PASS" in r.stderr and json.loads(r.stdout)["kind"] == "suite"
