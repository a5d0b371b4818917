import json
import os
import shutil
import subprocess
import sys

import pytest

from sdw.cli import execute, main, run_experiment

ROOT = os.path.join(os.path.dirname(__file__), "..")
EXAMPLES = os.path.join(ROOT, "paper-examples")
INPUTS = os.path.join(EXAMPLES, "inputs")


def inp(name):
    return os.path.join(INPUTS, name)


@pytest.mark.parametrize("argv,code", [
    (["sdp", "fleischer", inp("fiber_z4.json")], 0),
    (["free", "lattice-leq", "x \\/ (y /\\ z)", "x"], 1),
    (["free", "monoid-relate", inp("sigma.txt"), "x", "y", "--max-len", "12"], 2),
    (["sdp", "fleischer", inp("missing.json")], 3),
    (["no-such-command"], 3),
    (["malcev", inp("lattice2.json")], 1),
    (["con", "lattice", "group:S3"], 0),
])
def test_exit_codes(argv, code):
    got, report = execute(argv)
    assert got == code, report
    assert report["exit"] == code and "result" in report
    assert report["outcome"] == {0: "verified", 1: "refuted", 2: "inconclusive", 3: "input error"}[code]


def test_refutation_carries_a_trace():
    _, report = execute(["free", "lattice-leq", "x \\/ (y /\\ z)", "x"])
    assert report["result"]["trace"]


def test_inconclusive_names_the_bound():
    _, report = execute(["free", "monoid-relate", inp("sigma.txt"), "x", "y", "--max-len", "12"])
    assert report["result"]["bound"] == "max_len"
    assert report["bounds"]["max_len"] == 12


def test_cap_exceeded_is_inconclusive(tmp_path):
    p = tmp_path / "five.json"
    p.write_text(json.dumps({"factors": ["group:Z2"] * 5, "generators": [[1, 1, 1, 1, 1], [1, 0, 0, 0, 0],
                                                                     [0, 1, 0, 0, 0], [0, 0, 1, 0, 0],
                                                                     [0, 0, 0, 1, 0]]}))
    code, report = execute(["sdp", "thm41", str(p)])
    assert code == 2 and "cap" in report["result"]["bound_hit"]


def test_malformed_algebra_is_input_error(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"size": 2, "signature": [{"name": "f", "arity": 1}], "tables": {"f": [0, 9]}}')
    code, report = execute(["alg", "show", str(p)])
    assert code == 3 and "out of range" in report["result"]["error"]


def test_json_output_is_deterministic(capsys):
    argv = ["--json", "comm", "compute", inp("s3.json"), "--congs", "1", "1"]
    outs = []
    for _ in range(2):
        assert main(argv) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    rep = json.loads(outs[0])
    assert rep["result"]["commutator"] == [[0, 3, 4], [1, 2, 5]]
    assert "timing" not in rep


def test_timing_only_on_request():
    _, rep = execute(["--timing", "con", "lattice", "group:S3"])
    assert rep["timing"]["seconds"] >= 0


def test_human_output(capsys):
    assert main(["free", "lattice-leq", "x", "x \\/ y"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("verified:")


def test_alg_export_round_trip(tmp_path):
    out = tmp_path / "d4.json"
    code, _ = execute(["alg", "export", "group:D4", "-o", str(out)])
    assert code == 0
    code, rep = execute(["con", "lattice", str(out)])
    assert code == 0 and rep["result"]["count"] == 6


def test_shipped_corpus_passes():
    code, rep = execute(["corpus", EXAMPLES])
    assert code == 0, rep["result"]["failed"]
    assert rep["result"]["total"] >= 20


def test_empty_corpus_passes(tmp_path):
    code, rep = execute(["corpus", str(tmp_path)])
    assert code == 0 and rep["result"]["total"] == 0


def test_wrong_expectation_is_named(tmp_path):
    shutil.copytree(INPUTS, tmp_path / "inputs")
    shutil.copy(os.path.join(EXAMPLES, "malcev_s3.json"), tmp_path)
    spec = json.load(open(os.path.join(EXAMPLES, "s3_congruences.json")))
    spec["name"] = "deliberately_wrong"
    spec["expect"]["result"]["count"] = 4
    (tmp_path / "wrong.json").write_text(json.dumps(spec))
    code, rep = execute(["corpus", str(tmp_path), "--workers", "2"])
    assert code != 0
    assert rep["result"]["failed"] == ["deliberately_wrong"]


def test_missing_input_fails_the_entry(tmp_path):
    (tmp_path / "x.json").write_text(json.dumps({"name": "x", "command": ["alg", "show", "nope.json"],
                                                 "inputs": ["nope.json"], "expect": {"exit": 3}}))
    assert run_experiment(str(tmp_path / "x.json"))["reason"].startswith("missing input")


def test_console_script():
    exe = shutil.which("sdw")
    cmd = [exe] if exe else [sys.executable, "-m", "sdw.cli"]
    r = subprocess.run(cmd + ["sdp", "fleischer", inp("fiber_z4.json")], capture_output=True, text=True)
    assert r.returncode == 0 and "verified" in r.stdout
