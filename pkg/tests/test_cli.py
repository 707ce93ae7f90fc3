import csv
import io
import json
import subprocess
import sys

import pytest

from reliable_fd.cli import DISCOVER_COLUMNS, main
from reliable_fd.datasets import write_tic_tac_toe_csv


@pytest.fixture(scope="module")
def tic_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "tic-tac-toe.csv"
    write_tic_tac_toe_csv(path)
    return str(path)


def _tsv(text):
    return list(csv.DictReader(io.StringIO(text), delimiter="\t"))


def test_discover_tsv(tic_csv, capsys):
    assert main(["discover", "--input", tic_csv, "--target", "class", "--k", "3"]) == 0
    out = capsys.readouterr().out
    lines = out.rstrip("\n").splitlines()
    assert lines[0].split("\t") == DISCOVER_COLUMNS
    assert all(len(line.split("\t")) == len(DISCOVER_COLUMNS) for line in lines)
    rows = _tsv(out)
    assert len(rows) == 3
    assert rows[0]["attributes"] == "top-left,top-right,middle-middle,bottom-left,bottom-right"
    assert rows[0]["guarantee"] == "exact"
    assert rows[0]["solution_depth"] == "5"


def test_discover_json(tic_csv, capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code = main(["discover", "--input", tic_csv, "--target", "class", "--alpha", "0.8",
                 "--format", "json", "--output", str(out_path)])
    assert code == 0
    assert capsys.readouterr().out == ""
    report = json.loads(out_path.read_text())
    assert report["guarantee"] == "alpha-approximate"
    assert report["n"] == 958 and report["d"] == 9
    assert report["patterns"][0]["indices"] == [0, 2, 4, 6, 8]
    assert set(report["stats"]) >= {"nodes_expanded", "prune_fraction", "max_depth"}
    assert json.loads(json.dumps(report)) == report


@pytest.mark.parametrize("argv, message", [
    (["--target", "nope"], "unknown target column"),
    (["--target", "class", "--input", "/does/not/exist.csv"], "input file not found"),
])
def test_discover_errors(tic_csv, capsys, argv, message):
    full = ["discover", "--input", tic_csv] + argv
    assert main(full) == 1
    err = capsys.readouterr().err
    assert err.startswith("reliable-fd discover: error:")
    assert message in err


def test_discover_rejects_bad_alpha(tic_csv):
    with pytest.raises(SystemExit):
        main(["discover", "--input", tic_csv, "--target", "class", "--alpha", "1.5"])


def test_bench_bias_tsv_reproducible(capsys):
    argv = ["bench-bias", "--pmfs-per-regime", "1", "--trials", "5", "--seed", "2"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first
    rows = _tsv(first)
    assert len(rows) == 9
    assert [(r["estimator"], r["n"]) for r in rows][:3] == [("f_hat", "5"), ("f_hat", "10"), ("f_hat", "20")]
    assert {"mu", "sigma", "mu_weak", "mu_strong"} <= set(rows[0])


def test_bench_bias_json(capsys):
    assert main(["bench-bias", "--pmfs-per-regime", "1", "--trials", "3", "--sizes", "5,7",
                 "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["config"]["sizes"] == [5, 7]
    assert len(report["reports"]) == 6


def test_bench_bias_dimensionality(capsys):
    assert main(["bench-bias", "--fig1", "--n", "200", "--attrs", "3", "--trials", "2"]) == 0
    rows = _tsv(capsys.readouterr().out)
    assert [r["dimensionality"] for r in rows] == ["1", "2", "3"]
    assert float(rows[2]["mean_f_hat"]) > float(rows[0]["mean_f_hat"])


def test_baseline_estimate(capsys):
    assert main(["baseline-estimate", "--d", "9", "--max-depth", "7", "--t", "0.001"]) == 0
    (row,) = _tsv(capsys.readouterr().out)
    assert row["nodes"] == "501"
    assert float(row["estimated_seconds"]) == pytest.approx(0.501)
    assert main(["baseline-estimate", "--d", "3", "--max-depth", "4", "--t", "1"]) == 1
    assert "must not exceed" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "reliable_fd", "baseline-estimate", "--d", "3",
                           "--max-depth", "3", "--t", "1", "--format", "json"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["nodes"] == 7
