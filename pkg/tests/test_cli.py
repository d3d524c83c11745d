import json
import subprocess
import sys

import pytest

from omnilie.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_d_of_jform(capsys):
    code, rep = run(capsys, "d", "jform(1; x1*dx1 @ e1; 0)")
    assert code == 0
    assert rep["result"] == "jform(2; 0; x1*dx1 @ e1)"
    assert (rep["m"], rep["r"]) == (1, 1)


def test_wedge_and_iota(capsys):
    _, rep = run(capsys, "wedge", "x2*dx1", "jform(1; dx2 @ e1; 0)")
    assert rep["result"] == "jform(2; x2*dx1^dx2 @ e1; 0)"
    _, rep = run(capsys, "iota", "der(X1=1; )", "jform(1; x1*dx1 @ e1; 0)")
    assert rep["result"] == "jform(0; x1 @ e1)"


def test_dorfman_self_bracket(capsys):
    e = "omni(der(X1=1; ); jform(1; x1*dx1 @ e1; 0))"
    _, rep = run(capsys, "dorfman", e, e)
    assert rep["result"] == "omni(der(; ); jform(1; 0; x1 @ e1))"
    _, rep = run(capsys, "pair", e, e)
    assert rep["result"] == "jform(0; x1 @ e1)"


def test_jacobiator_exit_code(capsys):
    e = "omni(der(X1=x1; ); jform(1; x1*dx1 @ e1; 0))"
    code, rep = run(capsys, "jacobiator", e, e, e)
    assert code == 0 and rep["vanishes"] is True


def test_isotropy_witness_is_one_based(capsys):
    text = "bmap(1; jform(1; dx1 @ e1; 0); jform(1; 0; 0); jform(1; 0; 0))"
    code, rep = run(capsys, "isotropic", text, "--m", "2")
    assert code == 1
    assert rep["result"] == {"value": False, "witness": [1, 1]}


def test_involutive_false(capsys):
    code, rep = run(capsys, "dirac-from-form", "x1*dx2 @ e1")
    assert code == 0 and rep["result"]["isotropic"] and rep["result"]["involutive"]
    bm = rep["result"]["bmap"]
    code, rep = run(capsys, "involutive", bm)
    assert code == 0 and rep["result"]["direct_route"] is True


def test_member_perturbation(capsys):
    code, rep = run(capsys, "member", "genform(1; D3 @ e1)", "--m", "1", "--r", "2")
    assert code == 1
    w = rep["result"]["witness"][0]
    assert w["kind"] == "iota_endo" and w["frame"] == 3


def test_jacobi_broken(capsys):
    code, rep = run(capsys, "jacobi", "zstruct(top=1; c[3][1][2]=1; c[1][2][3]=1; c[1][1][3]=-1)")
    assert code == 1
    assert rep["result"]["witness"] == [1, 2, 3]
    code, _ = run(capsys, "involutive", "zstruct(top=1; c[3][1][2]=1; c[1][2][3]=1; c[2][1][3]=-1)")
    assert code == 0


@pytest.mark.parametrize("m, r, n, dim", [(3, 1, 2, 0), (2, 1, 2, 1)])
def test_rigidity(capsys, m, r, n, dim):
    code, rep = run(capsys, "rigidity", "--m", str(m), "--r", str(r), "--n", str(n), "--deg", "0")
    assert rep["result"]["solution_dim"] == dim
    assert code == (0 if dim == 0 else 1)


def test_rigidity_range(capsys):
    code, rep = run(capsys, "rigidity", "--m", "2", "--r", "1", "--n", "1")
    assert code == 2 and rep["error"]["kind"] == "RangeError"


def test_multicontact_modes(capsys):
    code, rep = run(capsys, "multicontact", "dx3 - x2*dx1 @ e1", "--points", "0,0,0; 1,2,3")
    assert code == 0 and [row["corank"] for row in rep["result"]] == [1, 1]
    code, rep = run(capsys, "multicontact", "--distribution", "dist(X1=1, X3=x2; X2=1)", "--points", "1/2,1,0")
    assert code == 0 and rep["result"][0]["roundtrip"] is True


def test_parse_error_report(capsys):
    code, rep = run(capsys, "d", "jform(1; dx1 @@ e1; 0)")
    assert code == 2
    err = rep["error"]
    assert err["kind"] == "ParseError" and (err["line"], err["col"]) == (1, 15)


def test_arity_and_unknown_command(capsys):
    code, rep = run(capsys, "dorfman", "omni(der(; ); jform(1; 0; 0))")
    assert code == 2 and rep["error"]["kind"] == "UsageError"
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_in_and_out_files(tmp_path, capsys):
    src = tmp_path / "ops.txt"
    src.write_text("jform(1; x1*dx1 @ e1; 0)\n")
    out = tmp_path / "rep.json"
    assert main(["d", "--in", str(src), "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["result"] == "jform(2; 0; x1*dx1 @ e1)"


def test_verify_subset_is_deterministic(capsys):
    argv = ["verify", "--seed", "7", "--trials", "3", "--m", "1", "--r", "1", "--n", "1",
            "--suite", "cartan.iota_d", "--suite", "omni.i"]
    code1 = main(argv)
    out1 = capsys.readouterr().out
    code2 = main(argv)
    out2 = capsys.readouterr().out
    assert code1 == code2 == 0 and out1 == out2
    rep = json.loads(out1)
    assert rep["ok"] and rep["prng"]["seed"] == 7
    assert [s["name"] for s in rep["runs"][0]["suites"]] == ["cartan.iota_d", "omni.i"]


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "omnilie.cli", "d", "jform(0; x1 @ e1)"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"] == "jform(1; 0; x1 @ e1)"
