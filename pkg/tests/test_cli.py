import csv
import json
import subprocess
import sys

import pytest

from conftest import FIXTURE_1MIB, FIXTURE_TESTS
from randlab.cli import EXIT_FAIL, EXIT_IO, EXIT_OK, EXIT_USAGE, main


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    return tmp_path_factory.mktemp("cli")


@pytest.fixture(scope="module")
def rank_report(workdir):
    data = workdir / "mt_rank.bin"
    out = workdir / "mt_rank.json"
    assert main(["generate", "--gen", "mt", "--seed", "3", "--bytes", "5200000", "--out", str(data)]) == 0
    assert main(["test", "--in", str(data), "--tests", "binary_rank", "--out", str(out),
                 "--jobs", "1"]) == EXIT_OK
    return out


def test_generate_mt_reference(workdir, capsys):
    out = workdir / "t.bin"
    assert main(["generate", "--gen", "mt", "--seed", "5489", "--bytes", "8", "--out", str(out)]) == 0
    data = out.read_bytes()
    assert len(data) == 8 and int.from_bytes(data[:4], "big") == 3499211612
    printed = capsys.readouterr().out
    assert "wrote 8 bytes" in printed and " s" in printed


def test_generate_dseq_default_size(workdir):
    out = workdir / "d.bin"
    assert main(["generate", "--gen", "dseq", "--range", "65000", "--out", str(out)]) == 0
    assert out.stat().st_size == 12_000_000


@pytest.mark.parametrize("argv, message", [
    (["generate", "--gen", "dseq", "--range", "2", "--out", "x.bin"], "insufficient primes"),
    (["generate", "--gen", "dseq", "--out", "x.bin"], "needs a range"),
    (["generate", "--gen", "mt", "--bytes", "3", "--out", "x.bin"], "at least 4"),
])
def test_generate_parameter_errors(argv, message, capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == EXIT_USAGE
    assert message in capsys.readouterr().err
    assert not (tmp_path / "x.bin").exists()


def test_generate_io_error(tmp_path):
    bad = tmp_path / "no" / "such" / "dir.bin"
    assert main(["generate", "--gen", "mt", "--bytes", "8", "--out", str(bad)]) == EXIT_IO


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["generate", "--gen", "pcg", "--out", "x"],
                                  ["test", "--in", "x", "--jobs", "0"]])
def test_usage_errors(argv):
    assert main(argv) == EXIT_USAGE


def test_test_tiny_file(tmp_path, capsys):
    tiny = tmp_path / "tiny.bin"
    tiny.write_bytes(bytes(100))
    assert main(["test", "--in", str(tiny)]) == EXIT_USAGE
    assert "9600000 bytes" in capsys.readouterr().err


def test_test_missing_file(tmp_path):
    assert main(["test", "--in", str(tmp_path / "nope.bin"), "--tests", "runs"]) == EXIT_IO


def test_test_unknown_name(capsys):
    assert main(["test", "--in", str(FIXTURE_1MIB), "--tests", "runs,bogus"]) == EXIT_USAGE
    assert "valid names" in capsys.readouterr().err


def test_test_fixture_json_and_csv(tmp_path, capsys):
    tests = ",".join(FIXTURE_TESTS)
    js, cs = tmp_path / "r.json", tmp_path / "r.csv"
    assert main(["test", "--in", str(FIXTURE_1MIB), "--tests", tests, "--out", str(js),
                 "--label", "mt7"]) == EXIT_OK
    data = json.loads(js.read_text())
    assert data["generator"] == "mt7"
    assert [r["test"] for r in data["results"]] == list(FIXTURE_TESTS)
    assert sum(data["summary"].values()) == len(FIXTURE_TESTS)
    assert main(["test", "--in", str(FIXTURE_1MIB), "--tests", tests, "--format", "csv",
                 "--out", str(cs)]) == EXIT_OK
    rows = list(csv.reader(cs.open()))
    assert rows[0] == ["test", "label", "pvalue", "verdict"]
    assert all(len(r[2].split(".")[1]) == 6 for r in rows[1:])


def test_test_small_range_dseq_fails(tmp_path, capsys):
    data, out = tmp_path / "d.bin", tmp_path / "d.json"
    assert main(["generate", "--gen", "dseq", "--range", "1000", "--out", str(data)]) == 0
    code = main(["test", "--in", str(data), "--tests", "squeeze", "--format", "json",
                 "--out", str(out)])
    assert code == EXIT_FAIL
    res = json.loads(out.read_text())["results"][0]
    assert res["test"] == "squeeze" and res["verdict"] == "Fail"
    assert "1.000000" in capsys.readouterr().out


def test_test_full_mt_file_passes(tmp_path):
    data = tmp_path / "mt.bin"
    assert main(["generate", "--gen", "mt", "--seed", "1", "--out", str(data)]) == 0
    assert main(["test", "--in", str(data), "--jobs", "1"]) == EXIT_OK


def test_jobs_from_environment(monkeypatch, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    base = ["test", "--in", str(FIXTURE_1MIB), "--tests", "runs,overlapping_sums"]
    monkeypatch.setenv("RANDLAB_JOBS", "2")
    assert main(base + ["--out", str(out1)]) == EXIT_OK
    monkeypatch.setenv("RANDLAB_JOBS", "zero")
    assert main(base) == EXIT_USAGE
    monkeypatch.delenv("RANDLAB_JOBS")
    assert main(base + ["--out", str(out2), "--jobs", "1"]) == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()


def test_compare(tmp_path, capsys):
    reports = []
    for seed in (7, 8, 9):
        data, out = tmp_path / f"{seed}.bin", tmp_path / f"{seed}.json"
        main(["generate", "--gen", "kiss", "--seed", str(seed), "--bytes", "100000", "--out", str(data)])
        main(["test", "--in", str(data), "--tests", "runs,overlapping_sums", "--out", str(out),
              "--label", f"kiss{seed}"])
        reports.append(str(out))
    capsys.readouterr()
    assert main(["compare", *reports]) == EXIT_OK
    text = capsys.readouterr().out
    assert text.splitlines()[0].split() == ["test", "kiss7", "kiss8", "kiss9"]
    assert main(["compare", reports[0], reports[0], "--format", "csv"]) == EXIT_OK
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert all(r[1] == r[2] for r in rows[1:])
    assert main(["compare", reports[0]]) == EXIT_USAGE


def test_compare_mismatched(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["test", "--in", str(FIXTURE_1MIB), "--tests", "runs", "--out", str(a)])
    main(["test", "--in", str(FIXTURE_1MIB), "--tests", "runs,overlapping_sums", "--out", str(b)])
    assert main(["compare", str(a), str(b)]) == EXIT_USAGE


def test_compare_malformed_report(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["compare", str(bad), str(bad)]) == EXIT_USAGE


def test_plot_rank6x8(rank_report, tmp_path, capsys):
    prefix = tmp_path / "fig"
    assert main(["plot", "--report", str(rank_report), "--test", "rank6x8",
                 "--out-prefix", str(prefix), "--svg"]) == EXIT_OK
    hist = list(csv.DictReader(open(f"{prefix}_hist.csv")))
    ecdf = list(csv.DictReader(open(f"{prefix}_ecdf.csv")))
    assert sum(int(r["count"]) for r in hist) == 25
    assert len(ecdf) == 25 and float(ecdf[-1]["fraction"]) == 1.0
    assert open(f"{prefix}.svg").read().startswith("<svg")
    assert "25 p-values" in capsys.readouterr().out


def test_plot_errors(rank_report, tmp_path):
    assert main(["plot", "--report", str(rank_report), "--test", "squeeze",
                 "--out-prefix", str(tmp_path / "x")]) == EXIT_USAGE
    assert main(["plot", "--report", str(tmp_path / "none.json"), "--test", "runs"]) == EXIT_IO


def test_plot_empty_pvalue_list(tmp_path):
    rep = tmp_path / "r.json"
    rep.write_text(json.dumps({
        "generator": "g", "file": {"bytes": 1, "sha256": "0"},
        "results": [{"test": "binary_rank", "pvalues": [{"label": "31x31", "value": 0.5}],
                     "verdict": "Pass", "reason": ""}],
        "summary": {"pass": 1, "suspect": 0, "fail": 0}}))
    assert main(["plot", "--report", str(rep), "--test", "rank6x8",
                 "--out-prefix", str(tmp_path / "p")]) == EXIT_USAGE


def test_console_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "randlab.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "generate" in proc.stdout
