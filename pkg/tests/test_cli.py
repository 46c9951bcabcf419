import csv
import json
import subprocess
import sys

import pytest

from hklab import cli

SMALL = ["--samples", "8", "--a", "1", "--audit", "algebra", "--audit", "forms", "--quiet"]


def run_main(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_json_report_shape(capsys):
    code, out, _ = run_main(SMALL, capsys)
    assert code == cli.EXIT_OK
    rep = json.loads(out)
    assert rep["schema"] == cli.SCHEMA
    assert rep["config"]["audits"] == ["algebra", "forms"]
    assert rep["summary"]["exit_code"] == 0
    keys = {"claim_id", "paper_locus", "class", "n", "a", "seed", "samples",
            "max_residual", "mean_residual", "status"}
    for item in rep["items"]:
        assert keys <= set(item)
    assert "generated_utc" in rep["timestamp"]


def test_out_and_csv(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, stdout, _ = run_main(SMALL + ["--out", str(out), "--csv", str(tmp_path / "csv")], capsys)
    assert code == 0 and stdout == ""
    rep = json.loads(out.read_text())
    with open(tmp_path / "csv" / "items.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["claim_id"] for r in rows] == [i["claim_id"] for i in rep["items"]]
    assert (tmp_path / "csv" / "residuals.csv").exists()


def test_summary_lines_on_stderr(capsys):
    code, _, err = run_main([a for a in SMALL if a != "--quiet"], capsys)
    assert code == 0
    assert "PASS" in err and "quat.relations" in err


@pytest.mark.parametrize("argv", [
    ["--n", "0"],
    ["--a", "-1"],
    ["--a", "1", "--a", "1"],
    ["--samples", "0"],
    ["--audit", "nonsense"],
    ["--tolerance", "quat.norm=-1"],
])
def test_config_errors(argv, capsys):
    code, out, err = run_main(argv, capsys)
    assert code == cli.EXIT_CONFIG
    assert out == "" and "error" in err


@pytest.mark.parametrize("argv", [["--tolerance", "novalue"], ["--backend", "symbolic"], ["--n", "x"]])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_tolerance_override_fails_item(capsys):
    code, out, _ = run_main(SMALL + ["--tolerance", "quat.norm=0"], capsys)
    rep = json.loads(out)
    status = {i["claim_id"]: i["status"] for i in rep["items"]}
    # an exact-zero tolerance is unreachable in floating point for |pq| = |p||q|
    assert status["quat.norm"] == "fail"
    assert code == cli.EXIT_ASSERT
    assert rep["summary"]["assert_failed"] == ["quat.norm"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hklab", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "--tolerance" in proc.stdout
