import json
import subprocess
import sys
from pathlib import Path

import pytest

from frobrel import catalog, frl
from frobrel.cli import main
from frobrel.frob2 import Groupoid
from frobrel.frob3 import frob3_to_connector
from frobrel.kernels import FROB2_FLAGS

CORPUS = Path(__file__).parent.parent / "structures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    payload = json.loads(out)
    assert payload["schema"] == 1
    assert payload["ok"] == (code == 0)
    return code, payload


def test_check_z2(capsys):
    code, out, _ = run(capsys, "check", CORPUS / "z2.frl")
    assert code == 0 and "F5_frobenius" in out
    code, p = run_json(capsys, "check", CORPUS / "z2.frl")
    assert p["kind"] == "frob2" and p["axioms"] == list(FROB2_FLAGS) + ["symmetric"]
    assert p["details"]["units"] == [0]


def test_check_failure_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.frl"
    bad.write_text("object A 1\nfrob2 f {\n  carrier A\n  unit { }\n  mult { (0,0)->{0} }\n}\n")
    code, p = run_json(capsys, "check", bad)
    assert code == 1 and not p["flags"]["F1_unit_left"]
    # the flags that decide the exit code can be chosen
    assert run(capsys, "check", bad, "--require", "F3_assoc")[0] == 0
    assert run(capsys, "check", bad, "--require", "nonsense")[0] == 2


def test_check_frob3_and_rel(capsys):
    code, p = run_json(capsys, "check", CORPUS / "tproj.frl")
    assert code == 0 and p["flags"]["sliding"] and p["details"]["unit_candidates"] == []
    code, p = run_json(capsys, "check", CORPUS / "coset.frl", "--name", "coset13")
    assert code == 0 and p["details"]["unit_candidates"] == [[0], [1]]
    code, p = run_json(capsys, "check", CORPUS / "coset.frl", "--name", "inclusion")
    assert code == 0 and p["kind"] == "rel" and p["flags"]["difunctional"]
    code, p = run_json(capsys, "check", CORPUS / "pair2.frl", "--name", "pair2")
    assert code == 0 and p["kind"] == "groupoid"


def test_input_errors_exit_2(tmp_path, capsys):
    code, p = run_json(capsys, "check", tmp_path / "missing.frl")
    assert code == 2 and p["error"]["type"] == "InputError"
    broken = tmp_path / "broken.frl"
    broken.write_text("object A 2\nrel r : A -> A { (0,1 }\n")
    code, p = run_json(capsys, "check", broken)
    assert code == 2 and (p["error"]["line"], p["error"]["col"]) == (2, 23)
    code, p = run_json(capsys, "check", CORPUS / "groups.frl")
    assert code == 2 and "--name" in p["error"]["message"]
    code, _, err = run(capsys, "check", CORPUS / "groups.frl")
    assert code == 2 and err.startswith("error:")


def test_convert_t3_to_connector(capsys):
    code, out, _ = run(capsys, "convert", CORPUS / "t3.frl", "--to", "connector")
    assert code == 0
    c = frl.loads(out).get("t3_connector")
    assert c == frob3_to_connector(catalog.T3())
    assert all(w == (x - y + z) % 3 for (x, y, z), w in c.p)


def test_convert_units(capsys, tmp_path):
    code, p = run_json(capsys, "convert", CORPUS / "t3.frl", "--to", "frob2")
    assert code == 2 and "--unit" in p["error"]["message"]
    out = tmp_path / "f.frl"
    code, _, _ = run(capsys, "convert", CORPUS / "t3.frl", "--to", "frob2", "--unit", "1", "--out", out, "--out-name", "g")
    f = frl.load(out).get("g")
    assert code == 0 and f.unit_elements == [1]
    assert all(f.M[a, b, (a - 1 + b) % 3] for a in range(3) for b in range(3))
    code, p = run_json(capsys, "convert", CORPUS / "tproj.frl", "--to", "frob2")
    assert code == 1 and p["error"]["flags"] == ["unital"]
    code, p = run_json(capsys, "convert", CORPUS / "t3.frl", "--to", "frob2", "--unit", "7")
    assert code == 2


def test_convert_roundtrip_through_files(capsys, tmp_path):
    g = tmp_path / "g.frl"
    assert run(capsys, "convert", CORPUS / "z2.frl", "--to", "groupoid", "--out", g)[0] == 0
    assert isinstance(frl.load(g).get(), Groupoid)
    back = tmp_path / "back.frl"
    assert run(capsys, "convert", g, "--to", "frob2", "--out", back, "--out-name", "z2")[0] == 0
    assert frl.load(back).get() == catalog.cyclic(2)


def test_split(capsys):
    code, p = run_json(capsys, "split", CORPUS / "t3.frl")
    assert code == 0 and len(p["classes"]) == 3
    f = frl.loads(p["frl"]).get()
    assert f.n == 3 and f.A.name == "Z3_L"
    code, p = run_json(capsys, "split", CORPUS / "tproj.frl")
    assert code == 0 and len(p["classes"]) == 1


def test_envelope(capsys):
    code, p = run_json(capsys, "envelope", CORPUS / "z2.frl")
    assert code == 0
    assert (p["size"], p["objects"], p["kind"]) == (8, 2, "groupoid")
    doc = frl.loads(p["frl"])
    g = doc.get("z2_envelope")
    assert isinstance(g, Groupoid) and g.C1.size == 8
    assert doc.get("z2_envelope_tags").target == "z2_envelope"
    code, p = run_json(capsys, "envelope", CORPUS / "tproj.frl")
    assert code == 0 and p["size"] == 9 and p["objects"] == 3
    code, p = run_json(capsys, "envelope", CORPUS / "coset.frl", "--name", "inclusion")
    assert code == 2


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--kind", "frob2", "--size", 2)
    p = json.loads(out)
    assert code == 0 and p["count"] == 3 and p["schema"] == 1
    p = json.loads(run(capsys, "enumerate", "--kind", "connector", "--size", 3)[1])
    assert p["count"] == 13
    p = json.loads(run(capsys, "enumerate", "--kind", "groupoid", "--size", 4)[1])
    assert p["count"] == 65
    p = json.loads(run(capsys, "enumerate", "--kind", "frob3", "--size", 2, "--require", "assoc")[1])
    assert p["count"] == 256
    code, out, _ = run(capsys, "enumerate", "--kind", "frob2", "--size", 9)
    assert code == 2 and json.loads(out)["error"]["type"] == "InputError"


def test_search_cp_gap(capsys):
    code, out, _ = run(capsys, "search", "cp-gap", CORPUS / "groups.frl", "--name", "z4")
    p = json.loads(out)
    assert code == 0 and p["witness"] == [0, 1, 3]
    assert p["closure_failure"] == ["product", 1, 1, 2]
    p = json.loads(run(capsys, "search", "cp-gap", CORPUS / "z2.frl")[1])
    assert p["witness"] is None


def test_diagram_eval(capsys):
    code, p = run_json(capsys, "diagram", "eval", "comu3 ; mu3", "--structure", "T3")
    assert code == 0 and p["type"] == ["+", "+"]
    assert p["pairs"] == [[[a], [a]] for a in range(3)]
    code, p = run_json(capsys, "diagram", "eval", "mu3", "--file", CORPUS / "t3.frl", "--structure", "t3")
    assert code == 0 and len(p["pairs"]) == 27
    code, p = run_json(capsys, "diagram", "eval", "mu3 ;\n (id+ *", "--structure", "T3")
    assert code == 2 and p["error"]["line"] == 2
    code, p = run_json(capsys, "diagram", "eval", "cup ; cap", "--structure", "T3")
    assert code == 2 and p["error"]["type"] == "DiagramTypeError"
    assert run(capsys, "diagram", "eval", "mu3", "--structure", "nope")[0] == 2


def test_diagram_normalize(capsys):
    code, p = run_json(capsys, "diagram", "normalize", "comu3 ; mu3")
    assert code == 0 and (p["m"], p["n"]) == (1, 1)
    assert p["normal_form"] == "cupx * id+ ; mu3 ; (id+ * cup ; mu3)"
    code, p = run_json(capsys, "diagram", "normalize", "mu3 * comu3")
    assert code == 2 and p["error"]["type"] == "NormalizationError"
    code, p = run_json(capsys, "diagram", "normalize", "cup ; capx", "--commutative")
    assert code == 0 and p["bending"]["closed"]


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "frobrel.cli", "check", str(CORPUS / "z2.frl"), "--json"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0 and json.loads(out.stdout)["ok"]


@pytest.mark.parametrize("argv", [["--help"], ["check", "--help"], ["diagram", "eval", "--help"]])
def test_help(argv, capsys):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code == 0
    assert "usage" in capsys.readouterr().out
