import json
import subprocess
import sys
from fractions import Fraction

import pytest

from szabo.cli import run
from szabo.curvature import CovDerivTensor
from szabo.exactpoly import MultiPoly, QuadForm, Signature
from szabo.obstruction import ProofTrace
from szabo.polydep import PolyMapFamily
from szabo.pseudolin import Matrix
from szabo.szaboclass import HomPolyMap


def write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


def jrun(*argv):
    code, out, err = run(list(argv) + ["--format", "json"])
    return code, (json.loads(out) if out else None), err


@pytest.fixture
def tensor_file(tmp_path):
    code, out, _ = run(["gen-fixture", "tensor", "--signature", "1,2", "--seed", "3", "--format", "json"])
    assert code == 0
    p = tmp_path / "t.json"
    p.write_text(out)
    return p


def test_check_symmetries(tmp_path, tensor_file):
    zero = write(tmp_path / "z.json", CovDerivTensor(Signature(1, 2)).to_json())
    assert run(["check-symmetries", zero])[0] == 0
    assert run(["check-symmetries", str(tensor_file)])[0] == 0
    doc = json.loads(tensor_file.read_text())["result"]
    doc["entries"][0]["coef"] = str(Fraction(doc["entries"][0]["coef"]) + 1)
    bad = write(tmp_path / "bad.json", doc)
    code, out, _ = jrun("check-symmetries", bad)
    assert code == 1 and out["result"]["violations"]
    (tmp_path / "m.json").write_text("{not json")
    assert run(["check-symmetries", str(tmp_path / "m.json")])[0] == 2
    assert run(["check-symmetries", str(tmp_path / "missing.json")])[0] == 2


def test_szabo(tmp_path, tensor_file):
    zero = write(tmp_path / "z.json", CovDerivTensor(Signature(1, 2)).to_json())
    code, out, _ = jrun("szabo", zero, "--at", "1,2,3")
    assert code == 0 and Matrix.from_json(out["result"]).is_zero()
    _, a, _ = jrun("szabo", str(tensor_file), "--at", "1,1/2,-2")
    _, b, _ = jrun("szabo", str(tensor_file), "--at", "2,1,-4")
    assert Matrix.from_json(b["result"]) == Matrix.from_json(a["result"]) * 8
    _, poly, _ = jrun("szabo", str(tensor_file), "--poly")
    S = HomPolyMap.from_json(poly["result"])
    assert S.evaluate((1, Fraction(1, 2), -2)) == Matrix.from_json(a["result"])
    assert run(["szabo", str(tensor_file), "--at", "1,x,2"])[0] == 2


def test_nilpotency(tmp_path):
    zero = write(tmp_path / "z.json", HomPolyMap.zero(Signature(1, 2), 3).to_json())
    code, out, _ = jrun("nilpotency", zero)
    assert code == 0 and out["result"]["vanishing_order"] == 1
    code, out, _ = jrun("gen-fixture", "nilpotent", "--signature", "1,2")
    f = write(tmp_path / "n.json", out)
    code, out, _ = jrun("nilpotency", f)
    assert code == 0 and out["result"]["vanishing_order"] == 2
    _, r11, _ = jrun("gen-fixture", "rank-one-11")
    assert run(["nilpotency", write(tmp_path / "r.json", r11)])[0] == 3


def test_signature_override(tmp_path):
    _, r11, _ = jrun("gen-fixture", "rank-one-11")
    f = write(tmp_path / "r.json", r11)
    assert run(["pclass", f])[0] == 0
    # reinterpreting the same entries in a definite metric breaks self-adjointness
    assert run(["pclass", f, "--signature", "0,2"])[0] == 1
    assert run(["pclass", f, "--signature", "1,2"])[0] == 2


def test_dependence(tmp_path):
    sig = Signature(1, 2)
    one, zero, q = MultiPoly.constant(1, 3), MultiPoly.zero(3), QuadForm(sig).poly
    consts = write(tmp_path / "c.json", PolyMapFamily(sig, 2, [(one, zero), (zero, one)]).to_json())
    code, out, _ = jrun("dependence", consts)
    assert code == 0 and out["result"]["k"] == 0 and out["result"]["chain"] == []
    qfam = write(tmp_path / "q.json", PolyMapFamily(sig, 2, [(q, zero), (zero, one)]).to_json())
    code, out, _ = jrun("dependence", qfam)
    assert code == 0 and out["result"]["k"] == 1 and len(out["result"]["chain"]) == 1
    same = write(tmp_path / "s.json", PolyMapFamily(sig, 2, [(one, q), (one, q)]).to_json())
    code, out, _ = jrun("dependence", same)
    assert code == 1 and out["result"]["status"] == "zero ideal"


def test_spectral(tmp_path):
    _, fx, _ = jrun("gen-fixture", "constant-profile", "--n", "1")
    f = write(tmp_path / "cp.json", fx)
    code, out, _ = jrun("spectral", f, "--at", "2,1,1")
    assert code == 0 and out["result"]["identity_holds"] and out["result"]["ker_im"]["holds"]
    _, sz, _ = jrun("gen-fixture", "szabo", "--signature", "1,2", "--seed", "2")
    code, out, _ = jrun("spectral", write(tmp_path / "sz.json", sz))
    assert code == 1 and out["result"]["diagnosis"]


def test_obstruction_and_wolf():
    code, out, _ = jrun("obstruction", "--case", "3", "--n", "12", "--k", "10", "--r", "4")
    assert code == 0 and out["result"]["verdict"] == "infeasible: rank forced to 0"
    assert ProofTrace.from_json(out["result"]).replay()
    assert run(["obstruction", "--case", "3", "--n", "12", "--k", "9", "--r", "4"])[0] == 2
    assert run(["obstruction", "--case", "2", "--n", "7", "--r", "2"])[0] == 3
    code, text, _ = run(["wolf", "--signature", "3,3"])
    assert code == 0 and text.startswith("(3,3): locally symmetric")
    assert "[2.7(2)]" in text
    code, text, _ = run(["wolf", "--signature", "8,8"])
    assert code == 1 and "inconclusive" in text
    assert run(["wolf", "--signature", "0,0"])[0] == 0


def test_output_is_deterministic_and_records_seed():
    argv = ["gen-fixture", "family", "--signature", "2,2", "--seed", "5", "--format", "json"]
    a, b = run(argv), run(argv)
    assert a == b
    assert json.loads(a[1])["seed"] == 5
    doc = json.loads(a[1])
    assert PolyMapFamily.from_json(doc["result"]).to_json() == doc["result"]


def test_json_schemas_round_trip(tmp_path, tensor_file):
    _, t, _ = jrun("gen-fixture", "tensor", "--signature", "2,2", "--seed", "1")
    assert CovDerivTensor.from_json(t["result"]).to_json() == t["result"]
    _, s, _ = jrun("szabo", str(tensor_file), "--poly")
    assert HomPolyMap.from_json(s["result"]).to_json() == s["result"]
    _, w, _ = jrun("wolf", "--signature", "2,11")
    assert ProofTrace.from_json(w["result"]).to_json()["steps"] == w["result"]["steps"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "szabo", "wolf", "--signature", "5,5"], capture_output=True, text=True)
    assert proc.returncode == 0 and "locally symmetric" in proc.stdout
