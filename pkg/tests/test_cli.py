import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from gtso.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


# -- decompose -----------------------------------------------------------------


def test_decompose_identity(capsys):
    code, out = run_json(capsys, "decompose", "--abcd", "1,0,0,1")
    assert code == 0
    for dec in out["decompositions"]:
        assert all(f["param"] == 0 for f in dec["factors"])
        assert dec["residual"] == 0


def test_decompose_eq25(capsys):
    code, out = run_json(capsys, "decompose", "--abcd", "2,1,1,1", "--form", "eq25")
    assert code == 0
    (dec,) = out["decompositions"]
    assert len(dec["factors"]) == 3
    assert dec["residual"] <= 1e-10
    assert np.allclose(dec["composed"], out["target"], atol=1e-10)


def test_decompose_bad_determinant(capsys):
    code, out, err = run(capsys, "decompose", "--abcd", "1,0,0,2")
    assert code == 2 and out == ""
    assert "determinant" in err.lower()


@pytest.mark.parametrize("abcd", ["1,0,0", "a,b,c,d", "1,0,0,nan", "-1,0,0,-1"])
def test_decompose_malformed(capsys, abcd):
    assert run(capsys, "decompose", f"--abcd={abcd}")[0] == 2


def test_decompose_csv(capsys):
    code, out, _ = run(capsys, "decompose", "--abcd", "2,1,1,1", "--output", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["form", "index", "kind", "param", "residual"]
    assert len(rows) == 1 + 6 + 3


# -- verify -----------------------------------------------------------------------


def test_verify_identity(capsys):
    code, out = run_json(capsys, "verify", "--abcd", "1,0,0,1", "--nmax", "12")
    assert code == 0 and out["pass"] is True
    assert {"params", "form", "truncation", "residuals", "thresholds", "pass"} <= set(out)
    assert max(out["residuals"].values()) <= 1e-9


def test_verify_2111_default_truncation_flags_heisenberg(capsys):
    code, out = run_json(capsys, "verify", "--abcd", "2,1,1,1", "--nmax", "16", "--margin", "6")
    assert code == 1 and out["pass"] is False
    assert any(k.startswith("heisenberg.") for k in out["failed"])
    assert not any(k.startswith(("symplectic.", "su11.")) for k in out["failed"])


def test_verify_small_box_fails(capsys):
    code, out = run_json(capsys, "verify", "--abcd", "2,1,1,1", "--nmax", "6", "--margin", "2")
    assert code == 1
    assert out["failed"]


def test_verify_with_labels(capsys):
    code, out = run_json(
        capsys, "verify", "--abcd", "1,0,0,1", "--nmax", "22", "--margin", "8",
        "--eta", "0.3,0.1", "--xi", "0.2,-0.1", "--lambda", "0.1",
    )
    res = out["residuals"]
    assert {"overlap", "kernel", "eigen.eta.first", "dilation.deficit", "s2.vacuum_amplitudes"} <= set(res)
    assert res["overlap"] <= 2e-3 and res["kernel"] <= 2e-3


def test_verify_bad_label(capsys):
    assert run(capsys, "verify", "--eta", "0.3")[0] == 2


def test_verify_bad_truncation(capsys):
    assert run(capsys, "verify", "--nmax", "6", "--margin", "6")[0] == 2


def test_verify_deterministic(capsys):
    args = ("verify", "--abcd", "1.2,0.3,0.2,0.8833333333333333", "--nmax", "8", "--margin", "2", "--draws", "5")
    first = run(capsys, *args)
    assert run(capsys, *args) == first


# -- state ----------------------------------------------------------------------------


def test_state_identity_vacuum(capsys):
    code, out = run_json(capsys, "state", "gtso_vacuum", "--abcd", "1,0,0,1", "--nmax", "8", "--margin", "2")
    assert code == 0
    (amp,) = out["amplitudes"]
    assert (amp["n1"], amp["n2"]) == (0, 0)
    assert amp["re"] == pytest.approx(1.0) and amp["im"] == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(out["covariance"], np.eye(4) / 2, atol=1e-12)


def test_state_eta_zero(capsys):
    code, out = run_json(capsys, "state", "eta", "--label", "0,0", "--nmax", "8", "--margin", "2")
    assert code == 0
    assert all(a["n1"] == a["n2"] for a in out["amplitudes"])
    assert len(out["amplitudes"]) == 9
    assert len({round(a["re"], 12) for a in out["amplitudes"]}) == 1


def test_state_gtso_vacuum_covariance(capsys):
    # (2,1,1,1) is still truncation-limited at n_max = 20 (about 2.4e-4); mild params reach 1e-6
    code, out = run_json(capsys, "state", "gtso_vacuum", "--abcd", "2,1,1,1", "--nmax", "20", "--margin", "8")
    assert code == 0
    assert out["covariance_residual"] <= 1e-3
    mild = "1.1,0.2,0.3,0.9636363636363636"
    code, out = run_json(capsys, "state", "gtso_vacuum", "--abcd", mild, "--nmax", "20", "--margin", "8")
    assert out["covariance_residual"] <= 1e-6


def test_state_needs_label(capsys):
    assert run(capsys, "state", "xi")[0] == 2
    assert run(capsys, "state", "xi", "--label", "x,y")[0] == 2


def test_state_csv(capsys):
    code, out, _ = run(capsys, "state", "gtso_vacuum", "--nmax", "6", "--margin", "2", "--output", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["kind", "i", "j", "re", "im"]
    assert sum(r[0] == "cov" for r in rows) == 16


# -- sweep ------------------------------------------------------------------------------


def test_sweep_identity_rows(capsys):
    code, out, _ = run(capsys, "sweep", "--nmax-list", "6,8", "--margin", "2", "--nmax", "6")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0][:2] == ["n_max", "margin"]
    assert len(rows) == 3
    assert max(float(x) for r in rows[1:] for x in r[2:]) <= 1e-9


def test_sweep_su11_constant(capsys):
    code, out = run_json(capsys, "sweep", "--nmax-list", "8,10", "--margin-fraction", "0.4", "--output", "json")
    for row in out["rows"]:
        assert all(v <= 1e-10 for k, v in row["residuals"].items() if k.startswith("su11."))
    assert "heisenberg.eq22.q_plus" in out["truncation_limited"]


@pytest.mark.parametrize("lst", ["10", "10,8", "10,x"])
def test_sweep_malformed(capsys, lst):
    assert run(capsys, "sweep", "--nmax-list", lst)[0] == 2


def test_out_file(capsys, tmp_path):
    path = tmp_path / "d.json"
    assert main(["decompose", "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(path.read_text())["params"] == {"a": 1.0, "b": 0.0, "c": 0.0, "d": 1.0}


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gtso", "decompose", "--abcd", "1,0,0,2"], capture_output=True, text=True
    )
    assert proc.returncode == 2
