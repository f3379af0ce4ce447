"""End-to-end tests for the command-line interface."""

import json

import numpy as np
import pytest

from nlocality.cli import main


def run_cli(tmp_path, args, name="out.json"):
    out = tmp_path / name
    rc = main(args + ["--output", str(out)])
    return rc, out


def test_violation_table1(tmp_path):
    rc, out = run_cli(tmp_path, ["violation", "--family", "gghz",
                                 "--alpha", "0.5", "--settings", "table1"])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"version", "config", "results", "timings"}
    row = doc["results"][0]
    assert len(row["i_values"]) == 8
    assert row["verdict"] in ("nontrilocal", "no violation found")


def test_violation_optimize_matches_closed_form(tmp_path):
    args = ["violation", "--family", "gghz", "--alpha", "0.5",
            "--settings", "optimize", "--restarts", "6", "--seed", "1"]
    rc, out = run_cli(tmp_path, args)
    assert rc == 0
    row = json.loads(out.read_text())["results"][0]
    assert abs(row["score"] - np.cbrt(2.0) * np.sin(1.0)) < 1e-4
    assert row["verdict"] == "nontrilocal"
    # byte-identical rerun for the same seed
    rc2, out2 = run_cli(tmp_path, args, name="out2.json")
    assert rc2 == 0
    assert out.read_bytes() == out2.read_bytes()


def test_violation_settings_file_roundtrip(tmp_path):
    rc, out = run_cli(tmp_path, ["violation", "--family", "gghz",
                                 "--alpha", "0.5", "--settings", "optimize",
                                 "--restarts", "4", "--seed", "0"])
    assert rc == 0
    row = json.loads(out.read_text())["results"][0]
    settings_path = tmp_path / "settings.json"
    settings_path.write_text(json.dumps(row["settings"]))
    rc2, out2 = run_cli(tmp_path, ["violation", "--family", "gghz",
                                   "--alpha", "0.5", "--settings", "file",
                                   "--settings-file", str(settings_path)],
                        name="replay.json")
    assert rc2 == 0
    replay = json.loads(out2.read_text())["results"][0]
    assert abs(replay["trilocal_score_all_tuples"] - row["score"]) < 1e-9


def test_scan_csv_monotone(tmp_path):
    rc, out = run_cli(tmp_path, ["scan", "--family", "gghz",
                                 "--grid", "alpha=0:0.7853981633974483:5",
                                 "--restarts", "4", "--seed", "0",
                                 "--format", "csv"], name="scan.csv")
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    header = lines[0].split(",")
    assert header[0] == "alpha"
    scores = [float(line.split(",")[header.index("score")])
              for line in lines[1:]]
    assert len(scores) == 5
    assert all(b >= a - 1e-6 for a, b in zip(scores, scores[1:]))


def test_config_file_merge(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"family": "gghz", "alpha": 0.3,
                               "settings": "table1"}))
    rc, out = run_cli(tmp_path, ["violation", "--config", str(cfg)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["config"]["alpha"] == 0.3
    # flag overrides config value
    rc2, out2 = run_cli(tmp_path, ["violation", "--config", str(cfg),
                                   "--alpha", "0.6"], name="o2.json")
    assert rc2 == 0
    assert json.loads(out2.read_text())["config"]["alpha"] == 0.6


def test_lhv_check(tmp_path):
    rc, out = run_cli(tmp_path, ["lhv-check", "--r-grid", "0:1:5"])
    assert rc == 0
    rows = json.loads(out.read_text())["results"]
    assert len(rows) == 5
    assert all(abs(r["trilocal_score"] - 1.0) < 1e-12 for r in rows)


def test_swap_report(tmp_path):
    rc, out = run_cli(tmp_path, ["swap", "--family", "amplitude",
                                 "--gamma", "0.2"])
    assert rc == 0
    rows = json.loads(out.read_text())["results"]
    assert len(rows) == 16
    assert all(abs(sum(r["probability"] for r in rows) / 4 - 1.0) < 1e-9
               for _ in (0,))


def test_swap_singleton_grouping_detects_entanglement(tmp_path):
    rc, out = run_cli(tmp_path, ["swap", "--family", "gghz",
                                 "--alpha", "0.7853981633974483",
                                 "--b-groupings", "000", "000,001,010,100",
                                 "--c-groupings", "000", "000,001,010,100",
                                 "--allow-unbalanced"])
    assert rc == 0
    rows = json.loads(out.read_text())["results"]
    assert len(rows) == 16
    assert any(r.get("entangled_by_criteria") for r in rows)
    # unbalanced groupings are rejected without the opt-in flag
    rc2 = main(["swap", "--family", "gghz", "--alpha", "0.7",
                "--b-groupings", "000", "000,001,010,100"])
    assert rc2 == 2


def test_nlocal_command(tmp_path):
    rc, out = run_cli(tmp_path, ["nlocal", "--n", "2", "--restarts", "6",
                                 "--seed", "0"])
    assert rc == 0
    row = json.loads(out.read_text())["results"][0]
    assert abs(row["score"] - np.sqrt(2.0)) < 1e-3


def test_config_errors_exit_2(capsys):
    assert main(["violation"]) == 2
    assert main(["violation", "--family", "gghz", "--alpha", "9.9"]) == 2
    assert main(["violation", "--family", "gghz"]) == 2
    assert main(["scan", "--family", "gghz", "--grid", "alpha=bad"]) == 2
    capsys.readouterr()


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    capsys.readouterr()
