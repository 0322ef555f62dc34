import json
import subprocess
import sys

import pytest

from gpi.cli import run
from gpi.theorems import OPEN_PROBLEM_MESSAGE


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify(capsys):
    code, out, _ = call(capsys, "classify", "--group", "Z*Z", "--g", "(1,0)", "--h", "(0,1)")
    assert code == 0 and out.strip() == "Universal"


def test_check_identity(capsys):
    code, out, _ = call(capsys, "check", "--grading", "almost-canonical", "--field", "F2",
                        "--poly", "[z1,z2,z3]")
    assert code == 0 and out.strip() == "true"
    code, out, _ = call(capsys, "check", "--grading", "universal",
                        "--poly", "[x1@(1,0),x1@(0,1)]")
    assert code == 0 and out.strip() == "false"


def test_verify_pass_and_fail(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, _, _ = call(capsys, "verify", "--grading", "universal", "--field", "Q",
                      "--max-deg", "4", "--out", str(out_file))
    assert code == 0
    rep = json.loads(out_file.read_text())
    assert rep["pass"] and rep["bounds"]["max_deg"] == 4
    code, _, err = call(capsys, "verify", "--grading", "universal", "--max-deg", "3",
                        "--drop", "ii")
    assert code == 1
    assert "{y1:1, y2:1}" in err


def test_remaining_finite_is_usage_error(capsys):
    code, _, err = call(capsys, "verify", "--grading", "remaining", "--field", "F2")
    assert code == 2 and OPEN_PROBLEM_MESSAGE in err
    code, _, err = call(capsys, "normal-form", "--grading", "remaining", "--field", "F3",
                        "--poly", "[z,y1]")
    assert code == 2 and "open problem" in err


def test_usage_errors(capsys):
    assert call(capsys, "check", "--poly", "[y1,y2]")[0] == 2
    assert call(capsys, "check", "--grading", "universal", "--poly", "[y1,,y2]")[0] == 2
    assert call(capsys, "classify", "--grading", "nope")[0] == 2
    assert call(capsys, "verify", "--grading", "canonical")[0] == 2
    assert call(capsys, "check", "--grading", "universal", "--field", "F4",
                "--poly", "[y1,y2]")[0] == 2
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_normal_form(capsys):
    code, out, _ = call(capsys, "normal-form", "--grading", "universal",
                        "--poly", "[x1@(1,0),[x1@(0,1),y1]]")
    rep = json.loads(out)
    assert code == 0
    assert {t["monomial"]: t["coef"] for t in rep["normal_form"]} == {
        "[x1@(1,0),x1@(0,1),y1]": 1, "[x1@(1,0),y1,x1@(0,1)]": -1}


def test_wqo_commands(capsys):
    code, out, _ = call(capsys, "wqo-compare", "--grading", "universal", "--kind", "V",
                        "--poly", "[x1@(1,0),x1@(0,1),y1]", "--poly", "[x1@(1,0),y1,x1@(0,1)]")
    assert code == 0 and json.loads(out)["order"] == "Less"
    code, out, _ = call(capsys, "minimal", "--grading", "universal", "--kind", "S",
                        "--poly", "[x1@(1,0),y1]", "--poly", "[x1@(1,0),y1^2]",
                        "--poly", "[x1@(1,0),y1,y2]")
    assert json.loads(out)["minimal"] == ["[x1@(1,0),y1]"]
    code, out, _ = call(capsys, "witness", "--grading", "universal", "--kind", "S",
                        "--poly", "[x1@(1,0),y1]", "--poly", "[x1@(1,0),y1^2]")
    rep = json.loads(out)
    assert code == 0 and rep["verified"] and rep["witness"] == "[x1@(1,0),y1,y1]"
    code, out, _ = call(capsys, "wqo-compare", "--grading", "remaining", "--kind", "Sc",
                        "--poly", "[y2,y1,z,y1]", "--poly", "[y2,y1,y1,z]")
    rep = json.loads(out)
    assert rep["encodings"][0] == {"k": 1, "j": 2, "pairs": [[1, 1], [1, 0]]}


def test_pi_map(capsys):
    code, out, _ = call(capsys, "pi-map", "--grading", "canonical", "--codomain", "Z2",
                        "--images", "(1)", "--poly", "[z1,y1]")
    rep = json.loads(out)
    assert code == 0 and rep["coarsening"] == "AlmostCanonical"
    assert rep["image"] == "[x1@(1),x1@(2)] + [x1@(1),y1]"


def test_nonspecht(capsys):
    code, out, _ = call(capsys, "nonspecht", "--kmax", "4")
    rep = json.loads(out)
    assert code == 0 and rep["pass"] and [s["strict"] for s in rep["steps"]] == [True, True]


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[gpi]\ngrading = universal\nfield = F2\n\n[verify]\nmax_deg = 3\n")
    code, out, _ = call(capsys, "verify", "--config", str(cfg))
    rep = json.loads(out)
    assert code == 0 and rep["field_mode"] == "F2" and rep["bounds"]["max_deg"] == 3
    code, out, _ = call(capsys, "verify", "--config", str(cfg), "--field", "Q")
    assert json.loads(out)["field_mode"] == "Q"


def test_reports_deterministic(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        subprocess.run([sys.executable, "-m", "gpi.cli", "verify", "--grading", "almost-canonical",
                        "--field", "F2", "--max-deg", "3", "--out", str(path)],
                       check=True, capture_output=True)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
