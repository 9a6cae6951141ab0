import io
import json
import subprocess
import sys

import pytest

from freemeixner.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv)
    return code, json.loads(text)


def test_meixner_semicircle():
    code, doc = run_json("meixner", "--b", "0", "--c", "0")
    assert code == 0
    assert doc["schema"] == "freemeixner.meixner/1"
    assert set(doc["jacobi"]["beta"]) == {"0/1"} and set(doc["jacobi"]["gamma"]) == {"1/1"}
    assert [doc["operator"][k] for k in "abcde"] == ["1/1", "0/1", "0/1", "0/1", "-1/1"]


def test_bochner_check_semicircle_moments():
    code, doc = run_json("bochner-check", "--moments", "1,0,1,0,2,0,5", "--depth", "6")
    assert code == 0
    assert doc["nullspace"] == [["1/1", "0/1", "0/1", "0/1", "-1/1"]]
    assert doc["verdict"] == "free Meixner candidate"


def test_bochner_check_without_candidate_exits_one():
    code, doc = run_json("bochner-check", "--moments", "1,0,1,0,3,0,5", "--depth", "6")
    assert code == 1
    assert doc["dimension"] == 0


def test_verify_all_subset():
    code, doc = run_json("verify-all", "--only", "2,3")
    assert code == 0
    assert doc["schema"] == "freemeixner.verify-all/1"
    assert doc["passed"] and [c["number"] for c in doc["results"]] == [2, 3]


def test_floats_are_a_usage_error():
    assert run("jacobi", "--moments", "1,0,1.5")[0] == 2


def test_invalid_c_is_a_usage_error():
    assert run("moments", "--b", "0", "--c", "-2")[0] == 2


def test_unknown_verb_is_a_usage_error():
    assert run("frobnicate")[0] == 2


def test_missing_eigenfunction_is_a_check_failure():
    code, doc = run_json("eigensystem", "--b", "0", "--c", "-1", "--degree", "3")
    assert code == 1
    assert doc["degree"] == 2


def test_order_environment_variable(monkeypatch):
    monkeypatch.setenv("FREEMEIXNER_ORDER", "4")
    code, text = run("moments", "--b", "1", "--c", "0", "--csv")
    assert code == 0
    assert text.splitlines() == ["n,moment", "0,1/1", "1,0/1", "2,1/1", "3,1/1", "4,3/1"]


def test_density_csv_and_atoms_file(tmp_path):
    atoms = tmp_path / "atoms.json"
    code, text = run("density", "--b", "1", "--c", "0", "--mean", "1/2", "--var", "1/2", "--grid", "3", "--atoms-out", str(atoms))
    assert code == 0
    assert text.splitlines()[0] == "x,density"
    assert len(text.splitlines()) == 4
    doc = json.loads(atoms.read_text())
    assert [a["weight"]["rational"] for a in doc["density"]["atoms"]] == ["1/2"]


def test_appell_phi_of_semicircle_gives_chebyshev():
    code, doc = run_json("appell", "--nu", "1,0,1,0,2", "--phi", "0,1", "--degree", "2")
    assert code == 0
    assert doc["polynomials"][2]["coeffs"] == ["-1/1", "0/1", "1/1"]


def test_rmt_threshold_controls_the_exit_code():
    assert run("rmt", "--model", "gue", "--n", "50", "--trials", "2", "--threshold", "0.5")[0] == 0
    assert run("rmt", "--model", "gue", "--n", "50", "--trials", "2", "--threshold", "0.001")[0] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ("meixner", "--b", "1/2", "--c", "3"),
        ("rmt", "--model", "wishart", "--n", "40", "--k1", "20", "--trials", "3", "--seed", "5"),
        ("eigensystem", "--b", "2", "--c", "1", "--degree", "5"),
    ],
)
def test_output_is_byte_stable(argv):
    assert run(*argv) == run(*argv)


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "freemeixner", "bochner-check", "--moments", "1,0,1,0,2,0,5", "--depth", "6"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "free Meixner candidate"
