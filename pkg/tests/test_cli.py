from __future__ import annotations

import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from mixlab.cli import run

GOLDEN = Path(__file__).parent / "golden"
SYSTEM = ["--p", "2", "--d", "2", "--poly", "1+u1+u2"]
TRI = "(0,0);(1,0);(0,1)"

GOLDEN_CASES = {
    "measure.json": ["measure", *SYSTEM, "--sites", TRI, "--values", "0,0,0"],
    "measure_joint.json": [
        "measure", *SYSTEM, "--sites", "(0,0)", "--values", "0", "--sites", "(0,0)", "--values", "0",
        "--sites", "(0,0)", "--values", "0", "--translates", "(0,0);(2,0);(0,2)",
    ],
    "scan.json": ["scan", *SYSTEM, "--shape", TRI, "--n", "1:8"],
    "scan.csv": ["scan", *SYSTEM, "--shape", TRI, "--values", "0,0,0", "--n", "1:16", "--format", "csv"],
    "witness.json": ["witness", *SYSTEM, "--shape", TRI, "--n", "1:16"],
    "witness_ternary.csv": ["witness", "--p", "3", "--d", "2", "--poly", "1+u1+u2", "--shape", TRI, "--n", "1:12", "--format", "csv"],
    "oracle.json": ["oracle", *SYSTEM, "--sites", "(0,0)", "--values", "0", "--window", "(0,0);(2,2)"],
    "sunit_enum.json": ["sunit-enum", "--gens", "2,3", "--coeffs", "1,1", "--height", "2"],
    "sunit_enum_signed.csv": ["sunit-enum", "--gens", "2,3", "--coeffs", "1,1", "--sign", "--height", "2", "--format", "csv"],
    "sunit_family.json": ["sunit-family", "--gens", "2,3", "--sign", "--coeffs", "1,1,-1", "--subset", "2,3", "--height", "3"],
    "sunit_frobenius.json": ["sunit-frobenius", "--p", "2", "--base", "t;1+t", "--coeffs", "1,1", "--n", "0:3"],
}


def invoke(argv, env=None) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def invoke_subprocess(argv, threads: int) -> subprocess.CompletedProcess:
    env = dict(os.environ, MIXLAB_THREADS=str(threads))
    return subprocess.run([sys.executable, "-m", "mixlab", *argv], capture_output=True, env=env, check=False)


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden(name):
    code, out, err = invoke(GOLDEN_CASES[name])
    assert code == 0, err
    path = GOLDEN / name
    if os.environ.get("MIXLAB_REGEN_GOLDEN"):
        path.write_text(out, encoding="utf-8")
    assert out.encode() == path.read_bytes()
    for _ in range(2):
        assert invoke(GOLDEN_CASES[name])[1] == out


@pytest.mark.parametrize("name", ["scan.csv", "witness.json", "sunit_family.json"])
def test_output_independent_of_threads(name):
    one = invoke_subprocess(GOLDEN_CASES[name], 1)
    four = invoke_subprocess(GOLDEN_CASES[name], 4)
    assert one.returncode == four.returncode == 0
    assert one.stdout == four.stdout == (GOLDEN / name).read_bytes()


def test_report_layout():
    code, out, _ = invoke(GOLDEN_CASES["measure.json"])
    report = json.loads(out)
    assert report["schema"] == "mixlab/1" and report["command"] == "measure"
    assert report["result"]["measure"] == {"num": 1, "den": 4}
    assert "output" not in report["input"] and report["input"]["poly"] == "1+u1+u2"


def test_scan_csv_rows():
    _, out, _ = invoke(GOLDEN_CASES["scan.csv"])
    lines = out.splitlines()
    defects = {int(line.split(",")[0]): line.split(",")[3] for line in lines[1:]}
    assert {n for n, v in defects.items() if v != "0"} == {1, 2, 4, 8, 16}
    assert defects[4] == "1/8"


def test_empty_cylinder_measure_is_one():
    code, out, _ = invoke(["measure", *SYSTEM, "--sites", "", "--values", ""])
    assert code == 0 and json.loads(out)["result"]["measure"] == {"num": 1, "den": 1}


@pytest.mark.parametrize("argv", [
    ["measure", *SYSTEM[:-1], "u3", "--sites", "(0,0)", "--values", "0"],
    ["measure", "--p", "4", "--d", "2", "--poly", "1", "--sites", "(0,0)", "--values", "0"],
    ["measure", *SYSTEM, "--sites", "(0,0)", "--values", "0,1"],
    ["scan", *SYSTEM, "--shape", TRI, "--n", "0:3"],
    ["sunit-enum", "--gens", "2,0", "--coeffs", "1,1", "--height", "1"],
    ["sunit-family", "--gens", "2,3", "--coeffs", "1,1,-1", "--subset", "4", "--height", "1"],
    ["sunit-frobenius", "--p", "2", "--base", "t;t", "--coeffs", "1,1", "--n", "1"],
    ["nonsense"],
    ["measure"],
])
def test_input_errors_exit_1(argv):
    code, out, err = invoke(argv)
    assert code == 1 and out == "" and err.startswith("mixlab: error:")


def test_work_bound_exits_2():
    code, _, err = invoke(["sunit-enum", "--gens", "2,3,5", "--coeffs", "1,1,1", "--height", "4", "--max-work", "100"])
    assert code == 2 and "work bound" in err
    code, _, _ = invoke(["oracle", "--p", "3", "--d", "2", "--poly", "1+u1+u2", "--sites", "(0,0)", "--values", "0",
                         "--window", "(0,0);(6,6)", "--max-window-states", "10"])
    assert code == 2


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\ngens = 2,3\ncoeffs = 1,1\nheight = 1\nsign = false\n", encoding="utf-8")
    code, out, _ = invoke(["sunit-enum", "--config", str(cfg)])
    assert code == 0 and json.loads(out)["result"]["count"] == 3
    code, out, _ = invoke(["sunit-enum", "--config", str(cfg), "--height", "2"])
    assert json.loads(out)["result"]["count"] == 5
    cfg.write_text("gens = 2,3\ncoeffs = 1,1\nheight = 2\nsign = true\n", encoding="utf-8")
    assert json.loads(invoke(["sunit-enum", "--config", str(cfg)])[1])["result"]["count"] == 15


def test_config_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("gens = 2,3\nfrobnicate = 1\n", encoding="utf-8")
    code, _, err = invoke(["sunit-enum", "--config", str(cfg), "--coeffs", "1,1", "--height", "1"])
    assert code == 1 and "frobnicate" in err
    code, _, _ = invoke(["sunit-enum", "--config", str(tmp_path / "missing.cfg")])
    assert code == 1


def test_output_flag(tmp_path):
    dest = tmp_path / "out.json"
    code, out, _ = invoke([*GOLDEN_CASES["witness.json"], "--output", str(dest)])
    assert code == 0 and out == ""
    assert dest.read_bytes() == (GOLDEN / "witness.json").read_bytes()
