import io
import json
import re
import subprocess
import sys

from padicdyn.cli import EXIT_MISMATCH, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, run
from padicdyn.decomposition import Decomposition, minimal_decomposition
from padicdyn.poly import IntPoly


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_decompose_json_contains_first_component():
    code, out, _ = call("decompose", "--prime", "2", "--poly", "0,1,1", "--max-level", "10",
                        "--format", "json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert {"center": 2, "level": 2} in [b for c in payload["B"] for b in c["balls"]]
    assert set(payload) >= {"prime", "poly", "max_level", "A", "B", "C", "undecided"}


def test_periods():
    assert call("periods", "--prime", "3")[:2] == (EXIT_OK, "1 2 3 4 6 9\n")
    code, out, _ = call("periods", "--prime", "2", "--poly", "0,1,1", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["periods"] == [1, 2, 4]


def test_periods_rejects_dot():
    assert call("periods", "--prime", "3", "--format", "dot")[0] == EXIT_USAGE


def test_verify_quadratic_match():
    code, out, _ = call("verify-quadratic", "--a", "1", "--b", "1", "--c", "-3",
                        "--max-level", "10")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "normal form x^2+x-3; B = {1+2Z_2}; fixture MATCH"


def test_verify_quadratic_mismatch_and_uncovered():
    code, out, _ = call("verify-quadratic", "--a", "1", "--b", "1", "--c", "-10")
    assert code == EXIT_MISMATCH and "MISMATCH" in out
    assert call("verify-quadratic", "--a", "1", "--b", "-1", "--c", "0")[0] == EXIT_USAGE


def test_decompose_round_trip():
    code, out, _ = call("decompose", "--prime", "3", "--poly", "1,1,0,1", "--max-level", "6",
                        "--format", "json")
    assert code == EXIT_OK
    dec = Decomposition.from_json(json.loads(out))
    assert dec == minimal_decomposition(IntPoly((1, 1, 0, 1), 3), 6)


def test_decompose_with_oracle():
    code, out, _ = call("decompose", "--prime", "2", "--poly", "-3,1,1", "--max-level", "8",
                        "--oracle-depth", "4")
    assert code == EXIT_OK and "oracle check: OK" in out


def test_deterministic_output():
    argv = ("lift-tree", "--prime", "2", "--poly", "0,1,1", "--max-level", "6")
    assert call(*argv) == call(*argv)
    argv = ("decompose", "--prime", "5", "--poly", "2,0,1", "--max-level", "4", "--format", "json")
    assert call(*argv) == call(*argv)


def test_lift_tree_dot_ids():
    code, out, _ = call("lift-tree", "--prime", "2", "--poly", "0,1,1", "--cycle", "0",
                        "--max-level", "5")
    assert code == EXIT_OK
    assert out.startswith("digraph lift_tree {")
    ids = set(re.findall(r"^\s+(n\d+_\d+) \[", out, re.M))
    assert {"n2_0", "n3_0", "n3_4"} <= ids
    assert "n2_0 -> n3_4;" in out
    assert "shape=box" in out


def test_lift_tree_json_and_text():
    code, out, _ = call("lift-tree", "--prime", "2", "--poly", "-1,0,1", "--format", "json")
    roots = json.loads(out)
    assert code == EXIT_OK and roots[0]["id"] == [2, 0]
    code, out, _ = call("lift-tree", "--prime", "2", "--poly", "-1,0,1", "--format", "text")
    assert "AttractingOrbit" in out


def test_classify():
    code, out, _ = call("classify", "--prime", "2", "--poly", "0,1,1", "--level", "3",
                        "--cycle", "4", "--format", "json")
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["behavior"] == "StronglySplits"
    assert (payload["A_n"], payload["B_n"]) == (3, 1)
    code, out, _ = call("classify", "--prime", "3", "--poly", "1,1", "--level", "1",
                        "--cycle", "0,1,2")
    assert code == EXIT_OK and "behavior" in out


def test_classify_rejects_non_cycles():
    assert call("classify", "--prime", "2", "--poly", "0,1,1", "--level", "3",
                "--cycle", "1")[0] == EXIT_USAGE


def test_usage_errors():
    assert call("decompose", "--prime", "4", "--poly", "0,1,1")[0] == EXIT_USAGE
    assert call("decompose", "--prime", "2", "--poly", "0,x")[0] == EXIT_USAGE
    assert call("frobnicate")[0] == EXIT_USAGE
    assert call("periods", "--prime", "3", "--poly", "0,1,1")[0] == EXIT_USAGE


def test_budget_exceeded():
    code, _, err = call("--budget", "64", "lift-tree", "--prime", "2", "--poly", "0,1,1",
                        "--level", "8", "--max-level", "9")
    assert code == EXIT_RESOURCE and "budget" in err


def test_oracle_check_small():
    code, out, _ = call("oracle-check", "--seed", "3", "--count", "4", "--max-level", "6",
                        "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["failures"] == []


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "padicdyn", "periods", "--prime", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "1 2 4\n"
