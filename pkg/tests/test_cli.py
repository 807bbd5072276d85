import json
import subprocess
import sys

import pytest

from mallestat.cli import run


def out_json(capsys, argv):
    assert run(argv) == 0
    return json.loads(capsys.readouterr().out)


def test_invariants_c3(capsys):
    doc = out_json(capsys, ["invariants", "--group", "C3"])
    assert doc["a"] == "1/2" and doc["b"] == 1
    assert doc["config"]["group"] == "C3"


def test_invariants_product(capsys):
    doc = out_json(capsys, ["invariants", "--n", "4", "--group", "C35"])
    assert doc["a"] == "1/35" and doc["b"] == 1


def test_fit_empty_exits_2(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert run(["fit", "--in", str(empty)]) == 2
    assert ">= 3 samples required" in capsys.readouterr().err


def test_fit_reads_count_csv(tmp_path, capsys):
    p = tmp_path / "c.csv"
    p.write_text("# comment\nX,count\n10,70\n100,700\n1000,7000\n")
    doc = out_json(capsys, ["fit", "--in", str(p)])
    assert abs(doc["slope"] - 1) < 1e-12 and doc["samples"] == 3


def test_verify_index(capsys):
    doc = out_json(capsys, ["verify", "index", "--n", "3", "--max-order", "1000"])
    assert doc["violations"] == [] and doc["ok"]


def test_delta(capsys):
    doc = out_json(capsys, ["delta", "--n", "5", "--group", "C11"])
    assert doc["delta"] == "-72/55" and doc["delta_lt_minus_1"]


@pytest.mark.parametrize("argv", [
    ["bogus"], ["delta", "--n", "3", "--group", "C3", "--nope"], ["enum", "cubic"], [],
])
def test_usage_errors_exit_64(argv, capsys):
    assert run(argv) == 64
    assert "usage" in capsys.readouterr().err


def test_validation_errors_exit_2(capsys):
    assert run(["delta", "--n", "3", "--group", "C4"]) == 2
    assert "odd" in capsys.readouterr().err
    assert run(["m3q", "--q", "49", "--max-X", "100"]) == 2
    assert run(["enum", "cyclic", "--ell", "11", "--max-disc", "100"]) == 2
    assert run(["kp", "count", "--group", "C3", "--q", "7", "--max-X", "1e15"]) == 2


def test_enum_is_deterministic_and_thread_independent(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["enum", "cubic", "--max-disc", "5000", "--out", str(a)]) == 0
    assert run(["enum", "cubic", "--max-disc", "5000", "--threads", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    head = a.read_text().splitlines()[:2]
    assert head[0].startswith("# mallestat schema-version=1")
    assert head[1] == "degree,disc,ram,cyclic"


def test_enum_output_round_trips_through_ingest(tmp_path, capsys):
    a = tmp_path / "a.csv"
    assert run(["enum", "cubic", "--max-disc", "1000", "--out", str(a)]) == 0
    doc = out_json(capsys, ["ingest", "--in", str(a)])
    assert (doc["bound"], doc["fields"], doc["non_cyclic"]) == (1000, 154, 149)
    lines = a.read_text().splitlines()
    lines[2] = lines[2][:-1] + "1"
    a.write_text("\n".join(lines) + "\n")
    assert run(["ingest", "--in", str(a)]) == 2
    assert "cyclic flag" in capsys.readouterr().err


def test_count_pairs_and_ingest(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("MALLESTAT_CACHE", str(tmp_path / "cache"))
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["count", "pairs", "--ell", "3", "--max-X", "1e11", "--samples", "4"]
    assert run(argv + ["--out", str(a)]) == 0
    assert run(argv + ["--threads", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[1] == "X,lower_count,upper_count,gap" and len(lines) == 6
    cached = tmp_path / "cache" / "cubic_4641.csv"
    assert cached.exists()
    doc = out_json(capsys, ["ingest", "--in", str(cached)])
    assert doc["kind"] == "cubic" and doc["bound"] == 4641


def test_m3q_kp_az(capsys):
    assert out_json(capsys, ["m3q", "--q", "23", "--max-X", "23"])["count"] == 0
    assert run(["kp", "count", "--group", "C3", "--q", "1,7", "--max-X", "50"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[1] == "X,q,count,ratio" and rows[2].startswith("50,1,3,")
    assert rows[3].startswith("50,7,2,")
    assert run(["az", "--ell", "3", "--z", "1", "--max-x", "100", "--min-x", "100"]) == 0
    assert capsys.readouterr().out.splitlines()[2].startswith("100,13,")


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "mallestat", "invariants", "--n", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["a"] == "1"
