import json
import subprocess
import sys

import pytest

from hmtriple.cli import canonical_bytes, main, run
from hmtriple.config import SUITES, ConfigError, RunConfig, parse_config


def test_list_suites(capsys):
    assert main(["--list-suites"]) == 0
    assert capsys.readouterr().out.split() == list(SUITES)


def test_config_roundtrip():
    cfg = parse_config("seed: 7\nwindow: '-1:1,-2:2'\nmarked_points: {w: [0, 3], z: [1, 2]}\nsuites: [cohomology]\n")
    assert cfg.seed == 7 and str(cfg.window) == "-1:1,-2:2"
    assert cfg.marked_w == (0, 3) and cfg.suites == ("cohomology",)


@pytest.mark.parametrize("text,line,fragment", [
    ("seed: 1\nsuites: [nope]\n", 2, "suites"),
    ("seed: -4\n", 1, "seed"),
    ("seed: 1\n\nmarked_points: {w: [0, 0], z: [1, 2]}\n", 3, "distinct"),
    ("window: '3:1,0:0'\n", 1, "window"),
    ("colour: red\n", 1, "unknown key"),
])
def test_config_errors_carry_lines(text, line, fragment):
    with pytest.raises(ConfigError) as err:
        parse_config(text, "cfg.yaml")
    assert f"cfg.yaml:{line}:" in str(err.value) and fragment in str(err.value)


def test_yaml_syntax_error_has_position():
    with pytest.raises(ConfigError) as err:
        parse_config("seed: [1,\n", "cfg.yaml")
    assert "line" in str(err.value)


def test_custom_lie_table():
    text = (
        "lie:\n  dim: 3\n  names: [e, h, f]\n"
        "  brackets: [[1, 0, {0: 2}], [1, 2, {2: -2}], [0, 2, {1: 1}]]\n"
        "  form: [[0, 0, 1], [0, 2, 0], [1, 0, 0]]\nsuites: [cohomology]\n"
    )
    report = run(parse_config(text))
    assert report["passed"]


def test_bad_config_exit_code(tmp_path, capsys):
    p = tmp_path / "c.yaml"
    p.write_text("seed: 1\nbogus: 2\n")
    assert main(["--config", str(p)]) == 2
    assert "c.yaml:2" in capsys.readouterr().err


def test_overrides_and_report_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["--suite", "cohomology", "--seed", "5", "--window=-1:1,-1:1", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["config"]["seed"] == 5 and rep["config"]["window"] == "-1:1,-1:1"
    assert set(rep) == {"library", "config", "passed", "suites", "timing"}
    assert set(rep["suites"][0]) == {"name", "status", "checks"}
    assert "PASS" in capsys.readouterr().out


@pytest.mark.parametrize("sabotage,suite", [
    ("drop_boundary", "retract_local"),
    ("broken_jacobi", "local_triple"),
    ("wrong_sigma", "pairing"),
])
def test_sabotage_yields_counterexample(sabotage, suite):
    cfg = RunConfig(suites=(suite,), sabotage=sabotage, samples_per_property=20)
    rep = run(cfg)
    assert not rep["passed"]
    failed = [c for s in rep["suites"] for c in s["checks"] if not c["passed"]]
    assert failed
    for c in failed:
        cx = c["counterexample"]
        assert cx["case_seed"][0] == 1 and cx["detail"]


def test_counterexample_reproduces():
    cfg = RunConfig(suites=("retract_local",), sabotage="drop_boundary", samples_per_property=30)
    assert canonical_bytes(run(cfg)) == canonical_bytes(run(cfg))


def test_determinism_across_processes(tmp_path):
    outs = []
    for k, hashseed in enumerate(("1", "2")):
        out = tmp_path / f"r{k}.json"
        subprocess.run(
            [sys.executable, "-m", "hmtriple.cli", "--suite", "local_triple", "--suite", "envelope", "--out", str(out)],
            check=True, capture_output=True, env={"PYTHONHASHSEED": hashseed, "PATH": ""},
        )
        outs.append(canonical_bytes(json.loads(out.read_text())))
    assert outs[0] == outs[1]


def test_different_seed_changes_samples():
    a = run(RunConfig(suites=("retract_local",), sabotage="drop_boundary", seed=1))
    b = run(RunConfig(suites=("retract_local",), sabotage="drop_boundary", seed=2))
    ca = [c.get("counterexample") for c in a["suites"][0]["checks"]]
    cb = [c.get("counterexample") for c in b["suites"][0]["checks"]]
    assert ca != cb
