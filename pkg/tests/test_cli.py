from __future__ import annotations

import json
import subprocess
import sys

import pytest

from thhfq import cli
from thhfq.report import Report


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_example(capsys):
    code, out, _ = run(capsys, "classify", "--q", "7", "--p", "5")
    assert code == 0
    assert out.strip() == '{"r":4,"v":2,"case":2}'


def test_classify_json_and_csv_agree(capsys, validate):
    _, out_json, _ = run(capsys, "classify", "--q", "49", "--p", "5", "--output", "json")
    _, out_csv, _ = run(capsys, "classify", "--q", "49", "--p", "5", "--output", "csv")
    data = json.loads(out_json)
    validate(data, "classify")
    assert out_csv.splitlines() == ["r,v,case", f"{data['r']},{data['v']},{data['case']}"]


def test_scenario_example(capsys, validate):
    code, out, _ = run(capsys, "scenario", "--id", "primitives-2p2-1", "--q", "2", "--p", "5")
    assert code == 0 and "PASS" in out.splitlines()[0]
    code, out, _ = run(capsys, "scenario", "--id", "primitives-2p2-1", "--q", "2", "--p", "5", "--output", "json")
    validate(json.loads(out), "report")


def test_poincare_example_text_and_json_report_the_same_numbers(capsys):
    args = ["poincare", "--preset", "v1-thh-case2", "--p", "5", "--max-degree", "20"]
    code, out, _ = run(capsys, *args, "--output", "json")
    dims = json.loads(out)["dims"]
    assert code == 0
    assert dims == [1, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 1, 2, 1, 0, 0, 0]
    _, text, _ = run(capsys, *args)
    table = [int(line.split()[1]) for line in text.splitlines()[1:]]
    assert table == dims
    _, csv_out, _ = run(capsys, *args, "--output", "csv")
    assert [int(r.split(",")[1]) for r in csv_out.splitlines()[1:]] == dims


def test_tor_text_and_json_agree(capsys):
    args = ["tor", "--preset", "v0-K", "--q", "7", "--max-degree", "24"]
    _, out, _ = run(capsys, *args, "--output", "json")
    rows = {(d["s"], d["t"]): d["dim"] for d in json.loads(out)["dims"]}
    _, text, _ = run(capsys, *args)
    parsed = {}
    for line in text.splitlines()[2:]:
        s, t, n = map(int, line.split())
        parsed[(s, t)] = n
    assert parsed == rows
    _, out_bar, _ = run(capsys, *args, "--method", "bar", "--output", "json")
    assert {(d["s"], d["t"]): d["dim"] for d in json.loads(out_bar)["dims"]} == rows


def test_hh_command(capsys):
    code, out, _ = run(capsys, "hh", "--preset", "v0-K", "--q", "2", "--max-degree", "16", "--output", "json")
    assert code == 0
    assert json.loads(out)["total_dims"][:9] == [1, 0, 0, 0, 0, 0, 0, 1, 2]


def test_resolution_command(capsys, validate):
    code, out, _ = run(capsys, "resolution", "--preset", "ahl3", "--output", "json")
    assert code == 0
    validate(json.loads(out), "resolution")
    code, out, _ = run(capsys, "resolution", "--preset", "v1-K", "--q", "49", "--max-degree", "16")
    assert code == 0 and out.startswith("P_0")


def test_primitives_command(capsys):
    code, out, _ = run(capsys, "primitives", "--preset", "v1-thh-homology", "--degree", "49", "--output", "json")
    data = json.loads(out)
    assert code == 0 and data["degrees"] == [{"degree": 49, "basis_dim": 6, "dim": 0, "primitives": []}]
    code, out, _ = run(capsys, "primitives", "--preset", "dual-steenrod", "--max-degree", "12", "--output", "csv")
    assert code == 0
    assert [line.split(",")[2] for line in out.splitlines()[1:]] == ["1"] + ["0"] * 12


def test_page_command_with_differentials(capsys, tmp_path, validate):
    specs = {"differentials": [
        {"page": 9, "assignments": [{"generator": "lambda1", "target": "sigma_x"}]},
        {"page": 10, "assignments": [{"generator": "mu1", "target": "sigma_y"}]}]}
    path = tmp_path / "d.json"
    path.write_text(json.dumps(specs))
    code, out, _ = run(capsys, "page", "--preset", "sset2-e2", "--q", "2", "--input-file", str(path),
                       "--max-degree", "50", "--output", "json")
    assert code == 0
    data = json.loads(out)
    validate(data, "page")
    assert data["page"] == 11
    assert data["total_dims"][:12] == [1] + [0] * 11


def test_input_file_presentation(capsys, tmp_path):
    pres = {"p": 5, "generators": [{"name": "x", "degree": 3, "kind": "exterior"},
                                   {"name": "y", "degree": 4, "kind": "polynomial"}]}
    path = tmp_path / "p.json"
    path.write_text(json.dumps(pres))
    code, out, _ = run(capsys, "poincare", "--input-file", str(path), "--max-degree", "8", "--output", "json")
    assert code == 0 and json.loads(out)["dims"] == [1, 0, 0, 1, 1, 0, 0, 1, 1]


def test_env_var_sets_the_default_bound(capsys, monkeypatch):
    monkeypatch.setenv("THH_ENGINE_MAX_DEGREE", "9")
    _, out, _ = run(capsys, "poincare", "--preset", "v0-K", "--q", "2", "--output", "json")
    assert json.loads(out)["max_degree"] == 9
    monkeypatch.setenv("THH_ENGINE_MAX_DEGREE", "many")
    code, _, err = run(capsys, "poincare", "--preset", "v0-K", "--q", "2")
    assert code == 2 and "THH_ENGINE_MAX_DEGREE" in err


@pytest.mark.parametrize("argv", [
    ["classify", "--q", "7"],
    ["classify", "--q", "6", "--p", "5"],
    ["poincare", "--preset", "nope", "--q", "2"],
    ["poincare", "--preset", "v0-K"],
    ["poincare", "--preset", "v0-K", "--q", "2", "--max-degree", "-1"],
    ["scenario", "--id", "nope"],
    ["scenario"],
    ["scenario", "--id", "dga-case1", "--q", "7"],
    ["primitives", "--preset", "v0-K"],
    ["poincare", "--input-file", "/does/not/exist.json"],
    ["frobnicate"],
    ["classify", "--q", "x"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert "usage" in err


def test_failed_claim_exits_1(capsys, monkeypatch):
    def failing(name, params, D=None, unit=1):
        rep = Report(name, params.to_json())
        rep.claim("deliberately wrong", 1, 2)
        return rep
    monkeypatch.setattr(cli, "verify_theorem", failing)
    code, out, _ = run(capsys, "scenario", "--id", "v0ten", "--q", "2")
    assert code == 1 and "FAIL" in out


def test_list_flags(capsys):
    _, out, _ = run(capsys, "scenario", "--list")
    assert "sset2-case1" in out
    _, out, _ = run(capsys, "poincare", "--list")
    assert "omega-infinity" in out


def test_console_script_runs_as_a_module():
    proc = subprocess.run([sys.executable, "-m", "thhfq.cli", "classify", "--q", "2", "--p", "5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"r": 4, "v": 1, "case": 1}


def test_suite_command(capsys, validate):
    code, out, _ = run(capsys, "suite", "--output", "json", "--workers", "2")
    data = json.loads(out)
    validate(data, "suite")
    assert code == 0 and data["pass"]
    assert len(data["reports"]) == 21
