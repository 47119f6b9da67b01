import json
import subprocess
import sys
from fractions import Fraction

import pytest

from hermlab.cli import run
from hermlab.padic import LocalField, LocalMatrix, assert_unitary, random_k, x_lambda


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_qpoly_pinned_output(capsys):
    code, out = invoke(capsys, "hl", "qpoly", "--n", "1", "--parity", "odd", "--lambda", "1")
    assert code == 0
    assert out == "x + x^{-1}\n"


def test_count_norm_pinned_output(capsys):
    code, out = invoke(capsys, "padic", "count-norm", "--p", "3", "--xi", "1", "--r", "0")
    assert code == 0
    assert out == "5/9\n"


def test_qpoly_json_form(capsys):
    code, out = invoke(
        capsys, "hl", "qpoly", "--n", "1", "--parity", "even", "--lambda", "2",
        "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["vars"] == 1
    exps = sorted(t["exp"][0] for t in payload["terms"])
    assert exps == [-2, 0, 2]


def test_verify_subset_passes(capsys):
    code, out = invoke(
        capsys, "verify", "norm-volume,height-phase,k1-cell-counts", "--n", "1",
        "--seed", "7", "--workers", "1",
    )
    assert code == 0
    assert out.count("PASS") == 3
    assert "all 3 checks passed" in out


def test_verify_unknown_check_is_usage_error(capsys):
    code, _ = invoke(capsys, "verify", "no-such-check")
    assert code == 2


def test_verify_usage_error_on_bad_verb():
    assert run(["bogus"]) == 2


def test_resource_exit_code(capsys):
    code, _ = invoke(capsys, "padic", "count-norm", "--p", "997", "--xi", "1", "--r", "3")
    assert code == 3


def test_math_fail_exit_code(capsys):
    # an under-resolved grid leaves quadrature error above tolerance: the
    # report must say so and the process must signal a mathematical failure
    code, out = invoke(
        capsys, "plancherel", "inversion", "--n", "1", "--parity", "even",
        "--grid-N", "16",
    )
    assert code == 1
    assert "fail" in out


def test_report_breaks_down_by_format(capsys):
    args = ["verify", "measure-total-mass", "--n", "1", "--workers", "1"]
    _, text = invoke(capsys, *args, "--format", "text")
    _, js = invoke(capsys, *args, "--format", "json")
    _, cs = invoke(capsys, *args, "--format", "csv")
    assert text.startswith("PASS")
    payload = json.loads(js)
    assert payload["results"][0]["id"] == "measure-total-mass"
    assert payload["results"][0]["passed"] is True
    assert cs.splitlines()[0] == "check,status,detail"


def test_verify_deterministic_bytes(capsys):
    args = ["verify", "cartan-membership,parity-sign", "--n", "1", "--seed", "5",
            "--format", "json"]
    _, first = invoke(capsys, *args)
    _, second = invoke(capsys, *args)
    assert first == second


def test_workers_do_not_change_bytes(capsys):
    base = ["verify", "norm-volume,identity-value,height-phase", "--n", "1"]
    _, seq = invoke(capsys, *base, "--workers", "1")
    _, par = invoke(capsys, *base, "--workers", "3")
    assert seq == par


def test_config_file_defaults_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "suite.cfg"
    cfg.write_text("# defaults\nn = 1\nseed = 11\nformat = csv\n")
    code, out = invoke(capsys, "verify", "identity-value", "--config", str(cfg))
    assert code == 0
    assert out.splitlines()[0] == "check,status,detail"
    code, out = invoke(
        capsys, "verify", "identity-value", "--config", str(cfg), "--format", "text"
    )
    assert code == 0
    assert out.startswith("PASS")


def test_config_file_rejects_unknown_keys(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bogus = 1\n")
    code, _ = invoke(capsys, "verify", "all", "--config", str(cfg))
    assert code == 2


def test_sph_omega_closed_form(capsys):
    code, out = invoke(capsys, "sph", "omega", "--ell", "1", "--s", "1")
    assert code == 0
    assert out == "(q + q^{-4} - q^{-7} - q^{-12})/(1 + q^{-3} - q^{-8} - q^{-11})\n"


def test_sph_parity_sign(capsys):
    code, out = invoke(capsys, "sph", "parity-sign", "--n", "2", "--lambda", "2,1")
    assert code == 0
    assert out == "sign: -1\n"


def test_gram_csv_headers_and_complex_format(capsys):
    code, out = invoke(
        capsys, "plancherel", "gram", "--n", "1", "--parity", "odd", "--q0", "3",
        "--grid-N", "32", "--weight", "1",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "partition;0;1"
    assert lines[1].startswith("0;1+0i;")
    assert lines[2].split(";")[2] == "0.888888888889+0i"


def test_matrix_file_roundtrip(tmp_path, capsys):
    field = LocalField(3)
    x = random_k(field, 1, seed=21).act(x_lambda(field, 1, (2,)))
    xfile = tmp_path / "x.json"
    xfile.write_text(json.dumps(x.to_json_dict()))

    code, out = invoke(capsys, "padic", "classify", "--in", str(xfile))
    assert code == 0
    assert "orbit: 2" in out and "member: yes" in out

    kfile = tmp_path / "k.json"
    code, out = invoke(
        capsys, "padic", "diagonalize1", "--in", str(xfile), "--prec", "12",
        "--out", str(kfile),
    )
    assert code == 0
    assert "orbit index: 2" in out
    k = LocalMatrix.from_json_dict(json.loads(kfile.read_text()))
    assert_unitary(k)
    y = k.act(x.to_residue(12))
    p = Fraction(3)
    for i, want in enumerate([p**2, Fraction(1), p**-2]):
        e = y.rows[i][i]
        assert e == e._coerce(want * p**y.shift, e.m)


def test_mc_omega_agreement(capsys):
    code, out = invoke(
        capsys, "padic", "mc-omega", "--ell", "0", "--s", "1", "--samples", "1500",
        "--seed", "3",
    )
    assert code == 0
    assert "agreement: pass" in out


def test_console_script_end_to_end():
    # one true subprocess round to prove the installed entry point works
    r = subprocess.run(
        [sys.executable, "-m", "hermlab.cli", "hl", "qpoly", "--n", "2", "--parity",
         "even", "--lambda", "1,1"],
        capture_output=True,
        text=True,
    )
    assert r.returncode == 0
    assert "x1*x2" in r.stdout
