import json
import subprocess
import sys

import pytest

from anticyclo.characters import DirichletChar
from anticyclo.cli import encode, main
from anticyclo.cyclotomic import CycloElt, cyclo_context
from anticyclo.measures import PowerSeries
from anticyclo.modforms import QExp, delta
from anticyclo.padic import PadicElt, padic_context


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, (json.loads(cap.out) if cap.out.strip() else None), cap.err


def test_classgroup(capsys):
    code, out, _ = run(capsys, "classgroup", "--disc", "-11")
    assert code == 0 and out["h"] == 1
    code, out, _ = run(capsys, "classgroup", "--disc", "-11", "--conductor", "5")
    assert out["h"] == 4 and out["structure"] == [4]
    code, out, _ = run(capsys, "classgroup", "--disc", "-11", "--levels", "2")
    assert [t["h"] for t in out["tower"]] == [4, 20]
    assert set(out["tower"][1]["fiber_sizes"].values()) == {20}


def test_classgroup_not_split(capsys):
    code, out, err = run(capsys, "classgroup", "--disc", "-11", "--p", "7", "--levels", "1")
    assert code == 1 and json.loads(err)["error"] == "NotSplit"


def test_theta(capsys):
    code, out, _ = run(capsys, "theta", "--disc", "-4", "--trunc-Q", "50")
    assert out["matches_divisor_sum"] and out["coeffs"][5] == 2


def test_measure_commands(capsys):
    _, out, _ = run(capsys, "measure", "moments", "--coeffs", "1,3,3,1")
    assert [m["lift"] for m in out["moments"]] == [1, 3, 9, 27]
    _, out, _ = run(capsys, "measure", "twist", "--dirac", "2", "--prec-M", "5")
    series = [c["lift"] for c in out["series"]["coeffs"]]
    mod = 5 ** 6
    assert series == [(-v) % mod for v in (1, 2, 1, 0, 0)]
    _, out, _ = run(capsys, "measure", "mellin", "--dirac", "3", "--m", "2", "--prec-M", "5")
    assert out["value"]["lift"] == (-9) % mod
    _, out, _ = run(capsys, "measure", "check-integration", "--seed", "3", "--char", "2:1:1",
                    "--m", "2")
    assert out["agree"] is True
    _, out, _ = run(capsys, "measure", "check-integration", "--char", "2:1:1", "--prec-pi", "7")
    assert out["rhs"]["piPrec"] == 7


def test_measure_from_file(tmp_path, capsys):
    path = tmp_path / "phi.json"
    path.write_text(json.dumps({"coeffs": [1, 2, 1]}))
    _, out, _ = run(capsys, "measure", "moments", "--in", str(path))
    assert [m["lift"] for m in out["moments"]] == [1, 2, 4, 8]


def test_family_commands(capsys):
    _, out, _ = run(capsys, "family", "specialize", "--k", "4", "--trunc-Q", "40")
    assert out["matches_divisor_sum"] and out["weight"] == 4
    _, out, _ = run(capsys, "family", "congruence", "--k", "2", "--k2", "22", "--trunc-Q", "60")
    assert out["min_valuation"] >= 2
    _, out, _ = run(capsys, "family", "specialize", "--k", "2", "--eps", "5", "--trunc-Q", "10")
    assert out["neben"]["eps"] == [1, 1]
    _, out, _ = run(capsys, "family", "ordinary", "--fixture", "delta11")
    assert out["rank"] == 1 and out["alpha_beta_matches"]
    _, out, _ = run(capsys, "family", "ordinary", "--fixture", "delta5")
    assert out["tau_p_is_unit"] is False and out["rank"] == 0


def test_assemble_and_lvalue(tmp_path, capsys):
    _, out, _ = run(capsys, "assemble")
    assert out["all_ok"] and len(out["checks"]) >= 12
    cfg = {"p": 5, "D": -11, "c": 1, "precision": {"N": 5, "M": 6}, "branch": 2,
           "classes": [{"form": [1, 1, 3], "c_j": 1, "d_j": 2, "texp": "fixture"}],
           "weights": [2, 6], "chars": [{"level": 2, "chi": "1/20"}], "m": [0]}
    path = tmp_path / "run.json"
    path.write_text(json.dumps(cfg))
    _, out, _ = run(capsys, "assemble", "--config", str(path))
    assert out["all_ok"] and {c["check"] for c in out["checks"]} == {"two_var_equals_slice", "unfolding"}
    _, out, _ = run(capsys, "lvalue", "--k", "2")
    assert out["value"] == out["slice_value"]
    code, _, err = run(capsys, "lvalue", "--k", "4")
    assert code == 1 and json.loads(err)["error"] == "BranchMismatch"


def test_output_file(tmp_path, capsys):
    path = tmp_path / "out.json"
    assert main(["classgroup", "--disc", "-23", "--out", str(path)]) == 0
    assert json.loads(path.read_text())["h"] == 3


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "anticyclo", "classgroup", "--disc", "-100"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["h"] == 2


def roundtrip(x):
    return json.loads(json.dumps(encode(x)))


def test_json_roundtrips():
    ctx = padic_context(5, 4)
    x = ctx.coerce(321)
    assert PadicElt.from_json(roundtrip(x)) == x
    W = cyclo_context(ctx, 2)
    z = W.primitive_root(3) * W.coerce(7)
    assert CycloElt.from_json(roundtrip(z)) == z
    Phi = PowerSeries.from_ints(ctx, [1, 5, 25, 7], exact=False)
    assert PowerSeries.from_json(roundtrip(Phi)) == Phi
    chi = DirichletChar(5, 3, 2, 7)
    assert DirichletChar.from_json(roundtrip(chi.to_json())) == chi
    f = delta(15)
    assert QExp.from_json(roundtrip(f.to_json())).coeffs == f.coeffs


def test_conductor_warnings():
    from anticyclo.cli import conductor_warnings
    assert conductor_warnings({}, 5, [{"level": 0}, {"level": 1}, {"level": 2}]) == []
    w = conductor_warnings({"r": 1, "form_level": 125}, 5, [{"level": 1}, {"level": 3}])
    assert len(w) == 2 and all("level 1" in x for x in w)
