import json
import os
import subprocess
import sys

import pytest

from groundzx import builders as B
from groundzx.cli import main
from groundzx.io import print_diagram


def run(*args, env=None):
    e = dict(os.environ)
    e.update(env or {})
    p = subprocess.run([sys.executable, "-m", "groundzx", *map(str, args)], capture_output=True, text=True, env=e)
    return p.returncode, p.stdout, p.stderr


def call(capsys, *args):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_interp_cnot(capsys, fixtures):
    code, out, _ = call(capsys, "interp", fixtures / "cnot.json")
    assert code == 0
    d = json.loads(out)
    assert d["backend"] == "exact" and (d["n_in"], d["n_out"]) == (2, 2)


def test_interp_ground_hint(capsys, fixtures):
    code, _, err = call(capsys, "interp", fixtures / "ground1.json")
    assert code == 1 and "cpm-interp" in err


def test_cpm_interp(capsys, fixtures):
    code, out, _ = call(capsys, "cpm-interp", fixtures / "ground_h.json")
    assert code == 0 and json.loads(out)["n_out"] == 0


def test_check_equal(capsys, fixtures):
    assert call(capsys, "check-equal", fixtures / "hh.json", fixtures / "identity1.json")[0] == 0
    assert call(capsys, "check-equal", fixtures / "hh.json", fixtures / "t_gate.json")[0] == 1


def test_cp_equal(capsys, fixtures):
    assert call(capsys, "cp-equal", fixtures / "ground_h.json", fixtures / "ground1.json")[0] == 0
    assert call(capsys, "cp-equal", fixtures / "discard_cnot.json", fixtures / "ground2.json")[0] == 0
    assert call(capsys, "cp-equal", fixtures / "t_gate.json", fixtures / "identity1.json")[0] == 1


def test_isometry_and_causal(capsys, fixtures, tmp_path):
    assert call(capsys, "isometry", fixtures / "cnot.json")[0] == 0
    assert call(capsys, "isometry", fixtures / "z21.json")[0] == 1
    assert call(capsys, "causal", fixtures / "cnot.json")[0] == 0
    assert call(capsys, "causal", fixtures / "scalar_phase.json")[0] == 0
    two = tmp_path / "two.json"
    two.write_text(print_diagram(B.z_spider(0, 0)))
    assert call(capsys, "causal", two)[0] == 1


def test_purify(capsys, fixtures):
    code, out, _ = call(capsys, "purify", fixtures / "ground2.json")
    assert code == 0 and json.loads(out)["ancilla_count"] == 2


def test_iso_witness(capsys, fixtures):
    code, out, _ = call(capsys, "iso-witness", fixtures / "cnot.json", fixtures / "cnot.json")
    assert code == 0 and json.loads(out)["checked"]
    assert call(capsys, "iso-witness", fixtures / "cnot.json", fixtures / "t_gate.json")[0] == 2


def test_verify_axioms(capsys):
    code, out, err = call(capsys, "verify-axioms", "zx-ground", "--samples", 3)
    d = json.loads(out)
    assert code == 0 and d["sound"] and len(d["rules"]) == 5
    assert "ground-cnot" in err
    assert call(capsys, "verify-axioms", "bogus")[0] == 2


def test_verify_proof(capsys, fixtures):
    assert call(capsys, "verify-proof", fixtures / "proof_h2.json")[0] == 0
    code, out, err = call(capsys, "verify-proof", fixtures / "proof_corrupted.json")
    assert code == 1 and json.loads(out)["failed_step"] == 1 and "step 1" in err


def test_counterexample(capsys):
    code, out, _ = call(capsys, "counterexample-cliffordt")
    d = json.loads(out)
    assert code == 0 and d["passed"]
    assert d["float_quotient"] == pytest.approx([-0.6, 0.8], abs=1e-12)
    assert call(capsys, "counterexample-cliffordt", "--phi", "((1,0,1,0),0)")[0] == 1
    assert call(capsys, "counterexample-cliffordt", "--phi", "garbage")[0] == 2


def test_stab_witness_one_qubit(capsys):
    code, out, _ = call(capsys, "stab-witness", "--qubits", 1)
    d = json.loads(out)
    assert code == 0 and d["all_found"] and len(d["states"]) == 6


def test_usage_errors(capsys, fixtures, tmp_path):
    assert call(capsys, "interp", tmp_path / "missing.json")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call(capsys, "interp", bad)[0] == 2
    assert main(["frobnicate"]) == 2
    assert run("frobnicate")[0] == 2


def test_env_config(fixtures):
    code, _, err = run("check-equal", fixtures / "hh.json", fixtures / "identity1.json", env={"GROUNDZX_TOL": "zero"})
    assert code == 2 and "GROUNDZX_TOL" in err
    code, out, _ = run("interp", fixtures / "t_gate.json", env={"GROUNDZX_BACKEND": "float"})
    assert code == 0 and json.loads(out)["backend"] == "float"


def test_module_entry_point(fixtures):
    code, out, _ = run("verify-proof", fixtures / "proof_ground_cnot.json", "--semantic-check")
    assert code == 0 and json.loads(out)["valid"]
