import csv
import io
import json
import subprocess
import sys

import mpmath
import pytest

from pcflab.cli import emit, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_golden(capsys):
    code, out, _ = run_cli(capsys, "eval", "--a", "[1]", "--b", "[1]", "--depth", "200", "--ref", "phi")
    assert code == 0
    res = json.loads(out)
    assert res["contains_reference"] is True
    with mpmath.workdps(80):
        assert mpmath.mpf(res["lo"]) <= mpmath.phi <= mpmath.mpf(res["hi"])


def test_analyze_apery(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--a", "[5,27,51,34]", "--b", "[0,0,0,0,0,0,-1]",
                           "--depth", "2000", "--ref", "zeta3")
    assert code == 0
    res = json.loads(out)
    assert abs(res["delta_formula"] - 0.0805) < 0.005
    assert res["fr_verdict"] == "FR"
    # round trip: the parsed report re-emits to the same text
    assert emit(res, "json") == out


def test_byte_identical_runs(capsys):
    argv = ("analyze", "--name", "table1_3n_p2", "--depth", "600", "--fit")
    _, first, _ = run_cli(capsys, *argv)
    _, second, _ = run_cli(capsys, *argv)
    assert first == second and first


def test_negative_leading_term(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--a", "6n+3", "--b", "-n^2", "--depth", "500")
    assert code == 0 and json.loads(out)["fr_verdict"] == "FR"


def test_search_csv(capsys):
    code, out, _ = run_cli(capsys, "search", "--b", "n^2+2n+1", "--box", "1:5,1:5")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert "2n+3" in [r["a"] for r in rows]
    assert all(r["family"] for r in rows)
    code, out, _ = run_cli(capsys, "search", "--b", "n^2+4n+2", "--box", "[(1,5),(1,5)]")
    assert code == 0 and out == ""


def test_deflate(capsys):
    code, out, _ = run_cli(capsys, "deflate", "--a", "3n+1", "--b", "9n^2-3n-2")
    res = json.loads(out)
    assert code == 0 and res["deflated_a"] == "1" and res["deflated_b"] == "1" and res["c"] == "3n+1"


def test_reduce(capsys):
    code, out, _ = run_cli(capsys, "reduce", "--a", "n", "--b", "2n^2+n", "--form", "n!/2^n",
                           "--depth", "500", "--bench", "300", "500", "--online")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["depth"] for r in rows] == ["300", "500"]
    assert all(r["integral"] == "True" and r["exact_match"] == "True" and r["online_matches"] == "True"
               for r in rows)
    assert rows[0]["recursion"].startswith("n(n-1)u'_n")


def test_reduce_reports_counterexample(capsys):
    code, out, _ = run_cli(capsys, "reduce", "--a", "n", "--b", "2n^2+n", "--form", "n!*3^n", "--depth", "100")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["integral"] == "False" and rows[0]["counterexample"]


def test_report_name(capsys):
    code, out, _ = run_cli(capsys, "report", "--name", "golden_ratio", "--depth", "300")
    assert code == 0 and json.loads(out)[0]["fr_verdict"]


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run_cli(capsys, "deflate", "--name", "golden_ratio", "-o", str(target))
    assert code == 0 and out == "" and json.loads(target.read_text())["c"] == "1"


@pytest.mark.parametrize("argv", [
    ("eval", "--a", "n"),
    ("eval", "--a", "n^", "--b", "1"),
    ("eval", "--name", "nope"),
    ("eval", "--name", "golden_ratio", "--a", "1"),
    ("eval", "--a", "1", "--b", "1", "--depth", "3"),
    ("search", "--b", "n^2+1", "--box", "5:1"),
    ("search", "--b", "n^2+1"),
    ("search", "--reproduce", "table9"),
    ("reduce", "--a", "n", "--b", "2n^2+n"),
    ("reduce", "--a", "n", "--b", "2n^2+n", "--form", "n!!!!("),
])
def test_usage_errors(capsys, argv):
    code, _, err = run_cli(capsys, *argv)
    assert code == 2 and "usage error" in err


def test_precision_env(capsys, monkeypatch):
    monkeypatch.setenv("PCFLAB_PRECISION", "lots")
    code, _, err = run_cli(capsys, "eval", "--a", "1", "--b", "1")
    assert code == 2 and "PCFLAB_PRECISION" in err
    monkeypatch.setenv("PCFLAB_PRECISION", "512")
    code, out, _ = run_cli(capsys, "eval", "--a", "1", "--b", "1", "--depth", "400")
    assert code == 0 and json.loads(out)["correct_digits"] > 150


def test_module_error_exit_code(capsys):
    # q_n vanishes at n = 2 for PCF[1, -1]
    code, _, err = run_cli(capsys, "eval", "--a", "1", "--b", "-1", "--depth", "50")
    assert code == 1 and err


def test_python_m_entry_point():
    out = subprocess.run([sys.executable, "-m", "pcflab", "deflate", "--a", "3n+1", "--b", "9n^2-3n-2"],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["c"] == "3n+1"
