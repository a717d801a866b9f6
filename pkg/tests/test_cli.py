import csv
import io
import json
import subprocess
import sys

import pytest

from cfladder import cli, verify
from cfladder.cf_engine import Surd, expand


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_expand_csv(capsys):
    code, out, _ = run(capsys, "expand", "--m", "2", "--power", "1", "--length", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["n,b,p_prev,q_prev", "0,1,1,0", "1,3,1,1", "2,1,4,3", "3,5,5,4"]


def test_expand_rejects_cube(capsys):
    code, out, err = run(capsys, "expand", "--m", "8", "--length", "4")
    assert code == 2
    assert out == ""
    assert "m must not be a perfect cube" in err


def test_expand_power2_length0(capsys):
    code, out, _ = run(capsys, "expand", "--m", "2", "--power", "2", "--length", "0")
    assert code == 0
    assert rows_of(out) == [{"n": "0", "b": "1", "p_prev": "1", "q_prev": "0"}]


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_expand_round_trip_big_integers(capsys, fmt):
    code, out, _ = run(capsys, "expand", "--m", "7", "--power", "2", "--length", "300", "--format", fmt)
    assert code == 0
    rows = rows_of(out) if fmt == "csv" else json.loads(out)["rows"]
    exp = expand(Surd(7, 2), 300)
    assert len(rows) == 301
    for row, tr in zip(rows, exp.triplets):
        assert (int(row["n"]), int(row["b"]), int(row["p_prev"]), int(row["q_prev"])) == \
            (tr.n, tr.b, tr.p_prev, tr.q_prev)
    assert exp.p(299).bit_length() > 64


def test_json_layout(capsys):
    _, out, _ = run(capsys, "expand", "--m", "3", "--length", "2", "--format", "json")
    doc = json.loads(out)
    assert doc["meta"] == {"m": 3, "length": 2, "power": 1, "version": cli.__version__}
    assert isinstance(doc["rows"][1]["p_prev"], str)


def test_ladder_small(capsys):
    code, out, err = run(capsys, "ladder", "--m", "2", "--length", "4")
    assert code == 0
    rows = rows_of(out)
    assert [(r["n"], r["k"]) for r in rows] == [("1", "2"), ("2", "3"), ("3", "4")]
    assert list(rows[0]) == cli.LADDER_COLUMNS
    assert "connections: 3" in err


def test_ladder_m6_exchange(capsys):
    code, out, err = run(capsys, "ladder", "--m", "6", "--length", "100", "--format", "json")
    meta = json.loads(out)["meta"]
    assert code == 0 and meta["connections"] > 0
    assert meta["exchange_checks_passed"] == meta["consecutive_pairs"] > 0


@pytest.mark.parametrize("m,length", [(2, 500), (10, 300)])
def test_verify_passes(capsys, m, length):
    code, out, err = run(capsys, "verify", "--m", str(m), "--length", str(length))
    assert code == 0, err
    rows = rows_of(out)
    assert rows and all(r["status"] == "pass" for r in rows)


def test_verify_cube(capsys):
    code, _, err = run(capsys, "verify", "--m", "27", "--length", "10")
    assert code == 2


def test_verify_exit_code_tracks_failures(capsys, monkeypatch):
    real = verify.run_verification

    def broken(m, N, **kw):
        report = real(m, N, **kw)
        report.results[0].failures.append("injected")
        return report

    monkeypatch.setattr(cli, "run_verification", broken)
    code, out, err = run(capsys, "verify", "--m", "2", "--length", "20")
    assert code == 1
    assert "FAIL triplet_invariants" in err
    assert sum(r["status"] == "fail" for r in rows_of(out)) == 1


def test_stats_table(capsys):
    code, out, err = run(capsys, "stats", "--m", "2", "--power", "1", "--length", "2000", "--cutoff", "20")
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == 21 and rows[-1]["k"] == ">20"
    assert float(rows[0]["expected"]) == pytest.approx(0.415037, abs=1e-6)
    assert sum(int(r["count"]) for r in rows) == 2000


def test_stats_empty(capsys):
    code, _, err = run(capsys, "stats", "--m", "2", "--length", "0")
    assert code == 1
    assert "empty sample" in err


def test_figure3(capsys):
    code, out, _ = run(capsys, "figure", "--which", "3", "--length", "1000")
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == 665
    assert list(rows[0]) == cli.FIGURE3_COLUMNS


def test_figure1(capsys):
    code, out, _ = run(capsys, "figure", "--which", "1", "--length", "20")
    rows = rows_of(out)
    rungs = [r for r in rows if r["record"] == "rung"]
    links = {(r["n"], r["k"]) for r in rows if r["record"] == "connection"}
    assert code == 0
    assert len(rungs) == 42 and {r["side"] for r in rungs} == {"xi", "eta"}
    assert {("2", "3"), ("3", "4")} <= links


def test_figure_unknown(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["figure", "--which", "7"])
    assert exc.value.code == 2


def test_out_path_and_determinism(tmp_path, capsys):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (first, second):
        assert cli.main(["ladder", "--m", "5", "--length", "200", "--out", str(path)]) == 0
    capsys.readouterr()
    assert first.read_bytes() == second.read_bytes()
    assert first.read_bytes().endswith(b"\n") and b"\r" not in first.read_bytes()


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cfladder", "expand", "--m", "3", "--length", "2"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[0] == "n,b,p_prev,q_prev"


def test_help_documents_columns(capsys):
    with pytest.raises(SystemExit):
        cli.main(["ladder", "--help"])
    out = capsys.readouterr().out
    assert ",".join(cli.LADDER_COLUMNS) in out
