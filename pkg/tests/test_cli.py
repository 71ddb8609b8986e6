import io
import json
import subprocess
import sys

import pytest

from reidemeister.automorphisms import sign_character
from reidemeister.cli import main
from reidemeister.groups import GroupFamily, build_quotient
from reidemeister.matrices import IntMatrix, dump_matrix
from reidemeister.witnesses import clear_caches


def run(*argv):
    clear_caches()
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "I.json").write_text(dump_matrix(IntMatrix.identity(2)))
    return tmp_path


@pytest.mark.parametrize("desc,order", [("sl:2:3", 24), ("sp:4:2", 720), ("sl:2:2", 6)])
def test_quotient(desc, order):
    code, out = run("quotient", "--group", desc)
    data = json.loads(out)
    assert code == 0 and data["order"] == order
    assert data["formula_check"] == "pass" and data["seed"] == 0


def test_quotient_text():
    code, out = run("quotient", "--group", "sl:2:3", "--format", "text")
    assert code == 0 and "order: 24" in out


def test_reidemeister_inner(workdir):
    code, out = run("reidemeister", "--group", "sl:2:3", "--aut", "inner:I.json")
    data = json.loads(out)
    assert code == 0 and data["reidemeister_number"] == 7
    assert data["automorphism"] == "inner:I.json" and len(data["classes"]) == 7


def test_reidemeister_tau_mod2():
    code, out = run("reidemeister", "--group", "sl:2:2", "--aut", "tau")
    assert code == 0 and sum(c["size"] for c in json.loads(out)["classes"]) == 6


def test_reidemeister_chartwist_file(workdir):
    g = build_quotient(GroupFamily("Sp", 4), 2)
    (workdir / "sign.json").write_text(sign_character(g).to_json())
    code, out = run("reidemeister", "--group", "sp:4:2", "--aut", "theta.chartwist:sign.json")
    assert code == 0 and json.loads(out)["reidemeister_number"] > 0
    code, _ = run("reidemeister", "--group", "sp:4:3", "--aut", "chartwist:sign.json")
    assert code == 2


def test_certify():
    code, out = run("certify", "--family", "A", "--aut", "tau", "--n", "2", "--k", "1", "--l", "2",
                    "--moduli", "3,5,7")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "distinct" and data["modulus"] in (3, 5, 7)
    code, out = run("certify", "--family", "A", "--aut", "tau", "--n", "2", "--k", "2", "--l", "2",
                    "--moduli", "3,5,7")
    assert code == 1 and json.loads(out)["verdict"] == "inconclusive"


def test_certify_theta_mod3_is_invalid():
    code, out = run("certify", "--family", "X", "--aut", "theta", "--n", "4", "--k", "1", "--l", "2",
                    "--moduli", "3")
    data = json.loads(out)
    assert code == 4 and data["report"]["closure"] is False


@pytest.mark.parametrize("argv", [
    ["quotient", "--group", "sl:2:x"],
    ["quotient", "--group", "sp:3:2"],
    ["reidemeister", "--group", "sl:2:3", "--aut", "rho"],
    ["reidemeister", "--group", "sl:2:3", "--aut", "inner:nowhere.json"],
    ["certify", "--family", "A", "--aut", "tau", "--n", "2", "--k", "1", "--l", "2", "--moduli", "1"],
    ["verify", "--suite", "everything"],
    ["frobnicate"],
    [],
])
def test_usage_errors(argv, workdir):
    assert run(*argv)[0] == 2


def test_resource_limit(monkeypatch):
    assert run("quotient", "--group", "sl:3:3", "--element-cap", "100")[0] == 3
    monkeypatch.setenv("REIDEMEISTER_ELEMENT_CAP", "100")
    assert run("quotient", "--group", "sl:3:3")[0] == 3


def test_non_descending_character(workdir):
    g = build_quotient(GroupFamily("Sp", 4), 2)
    (workdir / "sign.json").write_text(sign_character(g).to_json())
    code = run("certify", "--family", "X", "--aut", "chartwist:sign.json", "--n", "4", "--k", "1", "--l", "3",
               "--moduli", "3", "--group-kind", "sp")[0]
    assert code == 2


@pytest.mark.parametrize("suite", ["identities", "lemmas", "brauer"])
def test_verify(suite):
    code, out = run("verify", "--suite", suite)
    data = json.loads(out)
    assert code == 0 and data["passed"] and all(c["passed"] for c in data["checks"])


def test_verify_failure_exit_code(monkeypatch):
    from reidemeister import verification
    monkeypatch.setitem(verification.SUITE_FUNCS, "brauer", lambda rng: [verification.Check("broken", False)])
    code, out = run("verify", "--suite", "brauer", "--format", "text")
    assert code == 5 and "FAIL broken" in out


@pytest.mark.parametrize("argv", [
    ["reidemeister", "--group", "sl:2:5", "--aut", "tau.sigma", "--seed", "3"],
    ["certify", "--family", "X", "--aut", "sigma", "--n", "2", "--k", "1", "--l", "2", "--moduli", "3,5"],
    ["verify", "--suite", "identities", "--seed", "7", "--format", "text"],
])
def test_byte_identical_in_process(argv):
    assert run(*argv) == run(*argv)


def test_byte_identical_across_processes(workdir):
    argv = [sys.executable, "-m", "reidemeister", "reidemeister", "--group", "gl:2:3",
            "--aut", "chartwist:detsign", "--seed", "11"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["seed"] == 11
