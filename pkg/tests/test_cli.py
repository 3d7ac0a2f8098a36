import csv
import io
import random

import pytest

from tabntt.bench import CSV_HEADER, run_bench, write_csv
from tabntt.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def kv(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


def test_plan(capsys):
    code, out, _ = run(capsys, "plan", "--n", "16")
    d = kv(out)
    assert code == 0 and d["realized_n"] == "16" and d["P"] == "17"


def test_plan_too_small(capsys):
    code, _, err = run(capsys, "plan", "--n", "3")
    assert code == 2 and "n too small" in err


def test_plan_forced_m(capsys):
    code, out, _ = run(capsys, "plan", "--n", "100", "--m", "3")
    assert code == 0 and kv(out)["realized_n"] == "108"


def test_preprocess_idempotent_and_verify(capsys, tmp_path):
    a, b = tmp_path / "a.nttb", tmp_path / "b.nttb"
    assert run(capsys, "preprocess", "--n", "16", "--out", str(a))[0] == 0
    assert run(capsys, "preprocess", "--n", "16", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes() and a.read_bytes()[:4] == b"NTTB"
    code, out, _ = run(capsys, "verify", "--tables", str(a))
    assert code == 0
    code, out, _ = run(capsys, "verify", "--tables", str(a), "--level", "full")
    assert code == 0 and "dft_tables" in out and "FAIL" not in out


def test_verify_bad_magic(capsys, tmp_path):
    path = tmp_path / "t.nttb"
    run(capsys, "preprocess", "--n", "16", "--out", str(path))
    data = bytearray(path.read_bytes())
    data[1] = ord("X")
    path.write_bytes(bytes(data))
    code, _, err = run(capsys, "verify", "--tables", str(path))
    assert code == 5 and "bad magic" in err


def test_preprocess_budget_failure(capsys, tmp_path):
    code, _, err = run(capsys, "preprocess", "--n", "256", "--m", "16", "--out", str(tmp_path / "x"))
    assert code == 3 and err


def test_multiply(capsys):
    assert run(capsys, "multiply", "0x3", "0x4")[1].strip() == "0xc"
    assert run(capsys, "multiply", "0x0", "0xabc")[1].strip() == "0x0"
    rng = random.Random(7)
    a, b = rng.getrandbits(256), rng.getrandbits(256)
    assert run(capsys, "multiply", hex(a), hex(b))[1].strip() == hex(a * b)


def test_multiply_with_tables(capsys, tmp_path):
    path = tmp_path / "m.nttb"
    assert run(capsys, "preprocess", "--operand-bits", "64", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "multiply", "ff", "ff", "--tables", str(path))
    assert code == 0 and out.strip() == hex(255 * 255)


def test_multiply_capacity_failure(capsys, tmp_path):
    path = tmp_path / "s.nttb"
    run(capsys, "preprocess", "--n", "16", "--out", str(path))
    code, _, err = run(capsys, "multiply", "3", "4", "--tables", str(path))
    assert code == 3 and "R^2 * n < P" in err


def test_dft(capsys):
    code, out, err = run(capsys, "dft", "--n", "4", "--x", "1,0,0,0", "--counts")
    assert code == 0 and out.split() == ["1", "1", "1", "1"] and "table_reads=" in err
    code, out, _ = run(capsys, "dft", "--n", "4", "--x", "1 1 1 1", "--inverse", "--mode", "direct")
    assert out.split() == ["1", "0", "0", "0"]


def test_bench_rows_and_header(capsys, tmp_path):
    path = tmp_path / "b.csv"
    code, _, _ = run(capsys, "bench", "--sizes", "16,81,256", "--modes", "direct,lookup", "--csv", str(path),
                     "--verify")
    assert code == 0
    rows = list(csv.reader(path.open()))
    assert rows[0] == "n,mode,mulmod,addmod,table_reads,compares,wall_time_ns,ratio".split(",")
    assert len(rows) == 7
    assert [r[1] for r in rows[1:]] == ["direct", "lookup"] * 3


def test_bench_stdout(capsys):
    code, out, _ = run(capsys, "bench", "--sizes", "16", "--modes", "lookup")
    assert code == 0 and out.splitlines()[0] == ",".join(CSV_HEADER)


def test_bench_verify_mismatch(capsys, monkeypatch):
    import tabntt.bench as bench

    monkeypatch.setattr(bench, "ntt_forward", lambda x, ts, mode, counters=None: x)
    code, _, err = run(capsys, "bench", "--sizes", "16", "--verify")
    assert code == 4 and "disagrees" in err


def test_bench_records_match_counters():
    recs = run_bench([16, 36], ("direct", "lookup"))
    for r in recs:
        assert r.total == r.addmod + r.table_reads + r.compares
        assert r.ratio_ops_per_nlogn > 0
        assert r.table_reads > 0
    buf = io.StringIO()
    write_csv(recs, buf)
    assert len(buf.getvalue().splitlines()) == 5


def test_entry_point_help(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
