import csv
import io
import json
import subprocess
import sys

import pytest

from transpoly.cli import EXIT_BUDGET, EXIT_CACHE, EXIT_OK, EXIT_USAGE, main, run_cli
from transpoly.counting import MarginSpec, count_constant_margins


def ok(*args):
    code, out = run_cli(list(args))
    assert code == EXIT_OK, out
    return out


def test_count():
    assert ok("count", "--m", "3", "--s", "2", "--n", "3", "--t", "2") == "21"
    assert ok("count", "--m", "3", "--s", "2", "--n", "3") == "21"
    assert ok("count", "--m", "2", "--n", "4", "--z", "1") == "0"
    assert ok("count", "--m", "2", "--n", "4", "--z", "4") == str(count_constant_margins(MarginSpec(2, 4, 4, 2)))


def test_count_formats():
    doc = json.loads(ok("count", "--m", "5", "--s", "10", "--n", "5", "--format", "json"))
    assert doc["count"] == str(count_constant_margins(MarginSpec(5, 10, 5, 10)))
    rows = list(csv.reader(io.StringIO(ok("count", "--m", "2", "--s", "3", "--n", "2", "--format", "csv"))))
    assert rows == [["m", "s", "n", "t", "count"], ["2", "3", "2", "3", "4"]]


def test_volume_exact_b2():
    out = ok("volume", "--m", "2", "--n", "2", "--exact")
    assert "nu = 1\n" in out
    assert "vol = 2\n" in out


def test_volume_exact_radical():
    doc = json.loads(ok("volume", "--m", "2", "--n", "3", "--exact", "--format", "json"))
    assert doc["nu"] == "1/3"
    assert doc["vol"]["display"] == "2/3*sqrt(3)"


def test_volume_estimate_digits():
    out = ok("volume", "--m", "1", "--n", "1", "--digits", "4")
    assert "vol_estimate = 1.513e+0" in out


def test_ehrhart():
    out = ok("ehrhart", "--m", "3", "--n", "3", "--verify")
    assert "nu = 1/8" in out and "ok" in out
    doc = json.loads(ok("ehrhart", "--m", "2", "--n", "3", "--format", "json"))
    assert doc["period"] == 3 and doc["coefficients"] == ["1/3", "1", "1"]


def test_estimate_variants():
    out = ok("estimate", "--m", "2", "--n", "2", "--s", "1", "--t", "1", "--digits", "8")
    assert "log_count_estimate = 0.97000363" in out
    assert "log_nu_proxy" in ok("estimate", "--m", "3", "--n", "3", "--lambda-mult", "16")
    assert "log_vol_estimate" in ok("estimate", "--m", "3", "--n", "4")


def test_hyp():
    out = ok("hyp", "--m", "2000", "--n", "2000", "--lambda", "1", "--a", "0.4")
    assert "lhs = 3.00000" in out and "satisfied = yes" in out
    out = ok("hyp", "--m", "1000", "--n", "1000", "--s", "1000", "--a", "0.4")
    assert "satisfied = no" in out


@pytest.mark.parametrize(
    "args",
    [
        [],
        ["count", "--m", "3"],
        ["count", "--m", "x", "--n", "3", "--s", "1"],
        ["count", "--m", "2", "--n", "2", "--s", "1", "--t", "2"],
        ["count", "--m", "2", "--n", "3", "--s", "1"],
        ["volume", "--m", "2", "--n", "2", "--format", "xml"],
        ["hyp", "--m", "3", "--n", "3"],
        ["frobnicate"],
    ],
)
def test_usage_errors(args):
    code, out = run_cli(args)
    assert code == EXIT_USAGE
    assert out


def test_help_exits_cleanly():
    code, out = run_cli(["--help"])
    assert code == EXIT_OK and "table1" in out


def test_budget_exceeded():
    code, out = run_cli(["count", "--m", "7", "--s", "14", "--n", "7", "--time-budget", "0.01"])
    assert code == EXIT_BUDGET
    assert "budget" in out


def test_corrupt_cache(tmp_path):
    bad = tmp_path / "c.csv"
    bad.write_text("m,s,n,t,count\n3,2,3,2,twenty\n")
    code, out = run_cli(["count", "--m", "3", "--s", "2", "--n", "3", "--cache", str(bad)])
    assert code == EXIT_CACHE
    assert "line 2" in out


def test_cache_transparency(tmp_path):
    cache = str(tmp_path / "c.csv")
    cold = ok("count", "--m", "4", "--s", "6", "--n", "4", "--cache", cache)
    warm = ok("count", "--m", "4", "--s", "6", "--n", "4", "--cache", cache)
    assert cold == warm == str(count_constant_margins(MarginSpec(4, 6, 4, 6)))
    assert "4,6,4,6," + cold in (tmp_path / "c.csv").read_text()


def test_table1_cold_and_warm_identical(tmp_path):
    cache = str(tmp_path / "c.csv")
    cold = ok("table1", "--max-n", "4", "--cache", cache)
    warm = ok("table1", "--max-n", "4", "--cache", cache)
    assert cold == warm
    assert ok("table1", "--max-n", "4") == cold


def test_table1_formats(tmp_path):
    rows = json.loads(ok("table1", "--max-n", "3", "--format", "json"))
    assert [r["n"] for r in rows] == [1, 2, 3]
    assert rows[2]["exact_volume"]["display"] == "9/8"
    text = ok("table1", "--max-n", "3", "--format", "csv")
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert parsed[0]["estimate/actual"] == "1.51345"


def test_table1_actual_file_and_missing_rows(tmp_path):
    actual = tmp_path / "actual.csv"
    # n = 4 supplied from file instead of computed; the value here is our own exact volume
    actual.write_text("n,volume\n4,176/2835\n")
    rows = json.loads(ok("table1", "--max-n", "5", "--max-exact-n", "3",
                         "--actual-file", str(actual), "--format", "json"))
    assert rows[3]["source"] == "file"
    assert rows[3]["ratio"] == pytest.approx(1.2255964, abs=1e-6)
    assert rows[4]["ratio"] is None and rows[4]["status"] == "no exact value"


def test_table1_budget_marks_rows(tmp_path):
    code, out = run_cli(["table1", "--max-n", "7", "--max-exact-n", "7", "--time-budget", "0.05"])
    assert code == EXIT_BUDGET
    assert "BUDGET EXCEEDED" in out
    assert "1.51345" in out  # earlier rows still reported


def test_table1_figure(tmp_path):
    fig = tmp_path / "table1.png"
    ok("table1", "--max-n", "4", "--figure", str(fig))
    assert fig.stat().st_size > 1000
    assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_main_returns_code(capsys):
    assert main(["count", "--m", "2", "--s", "1", "--n", "2"]) == 0
    assert capsys.readouterr().out.strip() == "2"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "transpoly", "count", "--m", "3", "--s", "2", "--n", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "21"
    res = subprocess.run([sys.executable, "-m", "transpoly", "count"], capture_output=True, text=True)
    assert res.returncode == 1 and "usage" in res.stderr
