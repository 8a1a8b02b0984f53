import json
import subprocess
import sys

import pytest

from rainbowtight.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def complete6(tmp_path, capsys):
    path = tmp_path / "c6.json"
    code, _, _ = run(capsys, "--output", str(path), "gen", "complete", "--n", "6")
    assert code == 0
    return path


def test_gen_writes_same_json(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "--output", str(path), "gen", "random", "--n", "6", "--target", "1/2", "--seed", "3")
    assert code == 0 and path.read_text() == out
    data = json.loads(out)
    assert data["n"] == 6 and data["meta"]["generator"] == "random"


def test_usage_errors(capsys):
    assert run(capsys, "gen", "nothing", "--n", "5")[0] == 2
    assert run(capsys, "solve")[0] == 2
    assert run(capsys, "solve", "--input", "/nonexistent/file.json")[0] == 2
    assert run(capsys, "absorb", "path")[0] == 2
    assert run(capsys, "gen", "xy", "--n", "6", "--x-size", "2")[0] == 2


def test_malformed_instance(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 3, "k": 3, "graphs": [[[0, 1]], [], []]}')
    code, out, err = run(capsys, "solve", "--input", str(bad))
    assert code == 2 and out == "" and "graphs[0][0]" in err


def test_solve_found_and_absent(complete6, tmp_path, capsys):
    code, out, _ = run(capsys, "solve", "--input", str(complete6), "--seed", "1")
    data = json.loads(out)
    assert code == 0 and data["status"] == "found" and data["verified"] is True and "millis" not in data
    empty = json.loads(complete6.read_text())
    empty["graphs"][0] = []
    path = tmp_path / "e.json"
    path.write_text(json.dumps(empty))
    code, out, _ = run(capsys, "solve", "--input", str(path), "--exact")
    assert code == 0 and json.loads(out)["status"] == "absent"


def test_degree_connect_match(complete6, capsys):
    code, out, _ = run(capsys, "degree", "--input", str(complete6), "--d", "1")
    assert code == 0 and json.loads(out)["minimum"]["relativeDegree"] == "1"
    code, out, _ = run(capsys, "connect", "check", "--input", str(complete6), "--color", "2")
    data = json.loads(out)
    assert code == 0 and data["tightlyConnected"] and data["closedWalkOneModK"]["length"] % 3 == 1
    code, out, _ = run(capsys, "match", "--input", str(complete6), "--mode", "max")
    assert code == 0 and json.loads(out)["value"] == "2"
    code, out, _ = run(capsys, "match", "--input", str(complete6), "--mode", "lift")
    assert code == 0 and json.loads(out)["violations"] == []
    code, out, _ = run(capsys, "match", "--input", str(complete6), "--mode", "robust", "--gamma", "1/10")
    assert code == 0 and json.loads(out)["robust"]


def test_walk_commands(complete6, tmp_path, capsys):
    walk = tmp_path / "w.json"
    walk.write_text(json.dumps({"colors": [0, 1, 0, 1, 0], "points": [0, 1, 2, 3, 0, 1, 2]}))
    code, out, _ = run(capsys, "walk", "validate", "--input", str(complete6), "--walk", str(walk))
    data = json.loads(out)
    assert code == 0 and data["valid"] and not data["path"]
    code, out, _ = run(capsys, "walk", "shorten", "--input", str(complete6), "--walk", str(walk))
    data = json.loads(out)
    assert code == 0 and data["length"] <= data["originalLength"]
    walk.write_text(json.dumps({"colors": [0], "points": [0, 0, 1]}))
    code, out, _ = run(capsys, "walk", "validate", "--input", str(complete6), "--walk", str(walk))
    assert code == 1 and not json.loads(out)["valid"]


def test_vicinity_framework_pipeline(tmp_path, capsys):
    path = tmp_path / "c9.json"
    run(capsys, "--output", str(path), "gen", "complete", "--n", "9")
    code, out, _ = run(capsys, "vicinity", "verify", "--input", str(path))
    assert code == 0 and json.loads(out)["holds"]
    code, out, _ = run(capsys, "vicinity", "build", "--input", str(path))
    assert code == 0 and len(json.loads(out)["family"]) == 9
    code, out, _ = run(capsys, "framework", "verify", "--input", str(path))
    assert code == 0 and json.loads(out)["holds"]
    code, out, _ = run(capsys, "pipeline", "run", "--input", str(path), "--alpha", ".05", "--gamma", ".02",
                       "--delta", ".5556")
    assert code == 0 and json.loads(out)["implicationsHold"]


def test_failing_property_exits_one(complete6, capsys):
    data = json.loads(complete6.read_text())
    data["graphs"][0] = []
    complete6.write_text(json.dumps(data))
    code, out, _ = run(capsys, "framework", "verify", "--input", str(complete6))
    report = json.loads(out)
    assert code == 1 and not report["holds"] and report["F1"]["0"] is False


def test_probe_and_absorb(capsys):
    code, out, _ = run(capsys, "probe", "--n", "6", "--grid", "0:1:1/2", "--trials", "2", "--seed", "4")
    rows = json.loads(out)["rows"]
    assert code == 0 and [r["level"] for r in rows] == ["0", "1/2", "1"]
    assert rows[0]["fraction"] == 0.0 and rows[-1]["fraction"] == 1.0
    code, out, _ = run(capsys, "absorb", "demo")
    data = json.loads(out)
    assert code == 0 and data["gadget"]["holds"] and data["absorption"]["status"] == "found"


def test_absorb_gadget_file(tmp_path, capsys):
    from rainbowtight.core import onek_to_json
    from rainbowtight.instances import gadget_instance

    G, F, T, O, P, _ = gadget_instance()
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"graph": onek_to_json(G), "gadget": F.to_json(), "T": list(T), "O": list(O),
                                "path": P.to_json(), "S": list(T)}))
    code, out, _ = run(capsys, "absorb", "gadget", "--input", str(path))
    assert code == 0 and json.loads(out)["holds"]
    code, out, _ = run(capsys, "absorb", "path", "--input", str(path))
    assert code == 0 and json.loads(out)["status"] == "found"
    # S without O breaks the query's preconditions, which is bad input
    data = json.loads(path.read_text())
    del data["O"]
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "absorb", "path", "--input", str(path))
    assert code == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "rainbowtight", "gen", "complete", "--n", "5"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["n"] == 5
