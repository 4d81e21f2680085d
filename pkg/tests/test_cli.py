import io
import json
import subprocess
import sys

import pytest

from conftest import golden_jsonl, golden_transactions

from fpstream import MiningRequest
from fpstream.cli import main
from fpstream.oracle import WindowSnapshot, oracle_mine


def run(argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    old = sys.stdin, sys.stdout, sys.stderr
    sys.stdin, sys.stdout, sys.stderr = io.StringIO(stdin), out, err
    try:
        code = main(argv)
    finally:
        sys.stdin, sys.stdout, sys.stderr = old
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def events(tmp_path):
    p = tmp_path / "events.jsonl"
    p.write_text(golden_jsonl())
    return p


def records(text):
    return [json.loads(line) for line in text.splitlines()]


def by_window(text):
    out = {}
    for r in records(text):
        out.setdefault(r["window"], {})[tuple(r["pattern"])] = r
    return out


def test_mine_freq_first_window(events):
    code, out, _ = run(["mine", "--input", str(events), "--batch-size", "2",
                        "--window-batches", "2", "--mode", "freq", "--min-support", "2"])
    assert code == 0
    windows = by_window(out)
    assert sorted(windows) == [1, 2, 3]
    assert {p: r["support"] for p, r in windows[1].items()} == {
        ("A",): 2, ("B",): 2, ("C",): 2, ("D",): 2}


def test_mine_hup_unit_table(events, tmp_path):
    unit = tmp_path / "unit.csv"
    unit.write_text("sensor,watts\n" + "".join(f"{s},1\n" for s in "ABCDE"))
    code, out, _ = run(["mine", "--input", str(events), "--mode", "hup",
                        "--utility-table", str(unit), "--min-utility", "4"])
    assert code == 0
    last = by_window(out)[3]
    assert last[("A", "B")]["utility"] == 6 and last[("A", "B")]["support"] == 3


@pytest.mark.parametrize("seed_window", [1, 2, 3])
def test_mine_matches_oracle_per_window(events, watts_csv, watts, seed_window):
    code, out, _ = run(["mine", "--input", str(events), "--mode", "hup",
                        "--utility-table", str(watts_csv), "--min-utility", "5"])
    assert code == 0
    tx = golden_transactions()
    start = (seed_window - 1) * 2
    w = WindowSnapshot(tuple(tx[start:start + 4]), seed_window)
    expect = oracle_mine(w, MiningRequest("high-utility", min_utility=5), watts)
    got = [line for line in out.splitlines() if json.loads(line)["window"] == seed_window]
    assert got == expect.to_jsonl().splitlines()


def test_mine_empty_input(tmp_path):
    p = tmp_path / "empty.jsonl"
    p.write_text("")
    assert run(["mine", "--input", str(p)]) == (0, "", "")


def test_mine_parse_error_exit_1(tmp_path):
    p = tmp_path / "bad.jsonl"
    p.write_text('{"t": 1, "sensors": ["A"]}\n{"t": oops}\n')
    code, _, err = run(["mine", "--input", str(p)])
    assert code == 1 and "line 2" in err


def test_mine_nonincreasing_tid_exit_1(tmp_path):
    p = tmp_path / "bad.jsonl"
    p.write_text('{"t": 2, "sensors": ["A"]}\n{"t": 2, "sensors": ["B"]}\n')
    code, _, err = run(["mine", "--input", str(p)])
    assert code == 1 and "line 2" in err


def test_missing_utility_exit_2(events, tmp_path):
    partial = tmp_path / "partial.csv"
    partial.write_text("sensor,watts\nA,1\nB,1\n")
    code, _, err = run(["mine", "--input", str(events), "--mode", "hup",
                        "--utility-table", str(partial)])
    assert code == 2 and "'D'" in err and "line 1" in err


def test_config_errors_exit_1(events, tmp_path):
    assert run(["mine", "--input", str(events), "--mode", "hup"])[0] == 1
    assert run(["mine", "--input", str(tmp_path / "nope.jsonl")])[0] == 1
    assert run(["mine", "--batch-size", "0"])[0] == 1
    bad = tmp_path / "neg.csv"
    bad.write_text("sensor,watts\nA,-1\n")
    assert run(["mine", "--input", str(events), "--mode", "hup", "--utility-table", str(bad)])[0] == 1


def test_stream_equals_mine(events):
    _, mined, _ = run(["mine", "--input", str(events), "--min-support", "2"])
    code, streamed, _ = run(["stream", "--min-support", "2"], stdin=golden_jsonl())
    assert code == 0 and streamed == mined


def test_stream_skips_malformed(events):
    _, mined, _ = run(["mine", "--input", str(events), "--min-support", "2"])
    lines = golden_jsonl().splitlines(keepends=True)
    dirty = lines[:2] + ["garbage\n", '{"t": 1, "sensors": ["A"]}\n'] + lines[2:]
    code, streamed, err = run(["stream", "--min-support", "2"], stdin="".join(dirty))
    assert code == 0 and streamed == mined
    assert "line 3" in err and "line 4" in err


def test_stream_shorter_than_window():
    short = "".join(golden_jsonl().splitlines(keepends=True)[:3])
    assert run(["stream"], stdin=short)[:2] == (0, "")


def test_anomaly_budgets(events, watts_csv, watts):
    base = ["anomaly", "--input", str(events), "--utility-table", str(watts_csv)]
    code, out, _ = run(base + ["--budget", "1000"])
    assert code == 0 and out == ""
    code, out, _ = run(base + ["--budget", "0", "--min-utility", "10"])
    _, mined, _ = run(["mine", "--input", str(events), "--mode", "hup",
                       "--utility-table", str(watts_csv), "--min-utility", "10"])
    assert len(out.splitlines()) == len(mined.splitlines()) > 0
    assert all(set(r) == {"window", "pattern", "utility"} for r in records(out))


def test_anomaly_budget_20_follows_oracle(events, watts_csv, watts):
    code, out, _ = run(["anomaly", "--input", str(events), "--utility-table", str(watts_csv),
                        "--budget", "20"])
    assert code == 0
    tx = golden_transactions()
    w2 = WindowSnapshot(tuple(tx[4:]), 3)
    expect = [p.pattern for p in oracle_mine(w2, MiningRequest("high-utility"), watts) if p.utility > 20]
    got = [tuple(r["pattern"]) for r in records(out) if r["window"] == 3]
    assert got == expect
    # u({A,B,D,E}) = 1 * 11 on rows T5..T8
    assert ("A", "B", "D", "E") not in got


def test_anomaly_requires_hup(events):
    assert run(["anomaly", "--input", str(events), "--mode", "freq", "--budget", "1"])[0] == 1


def test_gen_deterministic():
    args = ["gen", "--sensors", "6", "--count", "50", "--density", "0.3", "--seed", "7"]
    a, b = run(args), run(args)
    assert a == b and a[0] == 0
    assert len(a[1].splitlines()) == 50
    other = run(["gen", "--sensors", "6", "--count", "50", "--density", "0.3", "--seed", "8"])
    assert other[1] != a[1]


def test_gen_full_density():
    code, out, _ = run(["gen", "--sensors", "4", "--count", "5", "--density", "1", "--seed", "1"])
    assert all(r["sensors"] == ["S1", "S2", "S3", "S4"] for r in records(out))


@pytest.mark.parametrize("density", ["0", "1.5", "-0.1"])
def test_gen_invalid_density(density):
    assert run(["gen", "--sensors", "4", "--count", "5", "--density", density])[0] == 1


def test_output_flag(events, tmp_path):
    target = tmp_path / "report.jsonl"
    code, out, _ = run(["mine", "--input", str(events), "--output", str(target)])
    assert code == 0 and out == "" and target.read_text().count("\n") > 0


def test_module_entry_point(events):
    proc = subprocess.run([sys.executable, "-m", "fpstream", "mine", "--input", str(events)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout
