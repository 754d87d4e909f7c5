import json
import subprocess
import sys
from pathlib import Path

import pytest

from cobring.cli import dumps, exit_code, main
from cobring.report import CheckReport, Status

GOLDEN = Path(__file__).parent / "golden"


def run(*args):
    return subprocess.run([sys.executable, "-m", "cobring", *args], capture_output=True,
                          text=True, timeout=300)


@pytest.mark.parametrize("flag, golden", [("--fgl", "fgl_trunc3.txt"),
                                          ("--two-series", "two_series_trunc3.txt")])
def test_table_golden(capsys, flag, golden):
    assert main(["table", flag, "--trunc", "3"]) == 0
    out = capsys.readouterr().out
    assert out == (GOLDEN / golden).read_text()
    if flag == "--fgl":
        assert "a(1,1) = -2*m1\n" in out


def test_table_images(capsys):
    assert main(["table", "--image", "t1", "--map", "theta"]) == 0
    assert capsys.readouterr().out == "theta(t1) = -1\n"
    assert main(["table", "--image", "s(1,2)", "--map", "epsilon", "--trunc", "3"]) == 0
    assert capsys.readouterr().out == "epsilon(s(1,2)) = 4*m1^2 - 3*m2\n"


@pytest.mark.parametrize("argv", [
    ["verify", "--check", "no-such-id"],
    ["verify", "--trunc", "2"],
    ["verify", "--kmax", "1"],
    ["verify", "--trunc", "five"],
    ["verify", "--mutate", "nomap:t1"],
    ["table", "--trunc", "3"],
    ["table", "--image", "q7"],
    ["table", "--image", "t1", "--map", "pi", "--k", "9"],
    [],
])
def test_usage_errors_exit_64(argv, capsys):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 64
    assert "error" in capsys.readouterr().err


def test_unknown_check_names_the_flag():
    proc = run("verify", "--check", "no-such-id")
    assert proc.returncode == 64
    assert "--check" in proc.stderr and "no-such-id" in proc.stderr


def report(status):
    return CheckReport("x", "", status, 3)


def test_exit_code_is_a_function_of_statuses():
    P, F, I = (report(s) for s in (Status.PASS, Status.FAIL, Status.INCONCLUSIVE))
    assert exit_code([P, P]) == 0
    assert exit_code([P, I]) == 2
    assert exit_code([I, F, P]) == 1
    assert exit_code([]) == 0


def test_verify_json_round_trip(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--trunc", "3", "--kmax", "3", "--check", "gk-constant",
                 "--check", "lazard-axioms", "--format", "json", "--canonical",
                 "--out", str(out)]) == 0
    text = out.read_text(encoding="utf-8")
    doc = json.loads(text)
    assert list(doc) == ["tool_version", "config", "checks"]
    assert doc["config"] == {"N": 3, "k_max": 3, "filter": ["gk-constant", "lazard-axioms"]}
    assert [c["id"] for c in doc["checks"]] == ["lazard-axioms", "gk-constant"]
    assert all("elapsed_ms" not in c for c in doc["checks"])
    assert dumps(doc) == text


def test_verify_timing_fields_present(capsys):
    assert main(["verify", "--trunc", "3", "--check", "gk-constant", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    (check,) = doc["checks"]
    assert check["status"] == "pass" and check["paper_anchor"] == "g_k(0) = 2"
    assert isinstance(check["elapsed_ms"], float)


def test_mutation_exits_1(capsys):
    assert main(["verify", "--trunc", "3", "--kmax", "3", "--check", "phi-relations",
                 "--mutate", "phi:t1"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_list_and_fracture_demo(capsys):
    assert main(["verify", "--list"]) == 0
    assert capsys.readouterr().out.count("\n") == 18
    assert main(["fracture-demo"]) == 0
    out = capsys.readouterr().out
    assert "Z[x]/(2x)" in out and "agree (j = 1)" in out
