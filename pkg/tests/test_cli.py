"""Command-line entry point: exit codes, artifacts, determinism."""

import json
from pathlib import Path

import pytest

from nlprob.cli import main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
PAIR = str(CONFIGS / "pair-counterexample.json")
DEMO = str(CONFIGS / "rectangular-demo.json")


def run(tmp_path, *argv):
    out = tmp_path / "out"
    code = main([*argv, "--out", str(out)])
    report = json.loads((out / "report.json").read_text()) \
        if (out / "report.json").is_file() else None
    return code, out, report


def record(report, name):
    matches = [r for r in report["checks"] if r["check"] == name]
    assert matches, f"no record named {name}"
    return matches[0]


class TestPairConfig:
    def test_full_run_passes(self, tmp_path, capsys):
        code, out, report = run(tmp_path, "all", "--config", PAIR)
        assert code == 0
        assert report["passed"] is True
        assert report["subcommand"] == "all"
        captured = capsys.readouterr()
        assert "RESULT: OK" in captured.out
        assert captured.err == ""

    def test_forward_violation_is_expected_and_pinned(self, tmp_path):
        _, _, report = run(tmp_path, "all", "--config", PAIR)
        forward = record(report, "forward-factorization")
        assert forward["expected_violation"] is True
        assert forward["pass"] is True  # violation demanded and observed
        assert forward["lhs"] == -0.21
        pin = record(report, "forward-expected")
        assert pin["expected_violation"] is False
        assert pin["pass"] is True and pin["gap"] == 0.0

    def test_negative_association_holds(self, tmp_path):
        _, _, report = run(tmp_path, "all", "--config", PAIR)
        na = record(report, "negative-association")
        assert na["pass"] is True and na["expected_violation"] is False
        assert na["verdict"] == "no-counterexample-found"

    def test_summary_marks_expected_violations(self, tmp_path):
        _, out, _ = run(tmp_path, "all", "--config", PAIR)
        lines = (out / "summary.txt").read_text().splitlines()
        assert all(line.startswith(("PASS", "FAIL")) for line in lines[:-2])
        assert any("(expected violation)" in line for line in lines)
        assert lines[-1].startswith("RESULT: OK")

    def test_subcommand_families(self, tmp_path):
        _, _, verify = run(tmp_path / "v", "verify", "--config", PAIR)
        assert verify["selected_checks"] == ["axioms", "chain", "inequalities"]
        _, _, deps = run(tmp_path / "d", "check-deps", "--config", PAIR)
        assert deps["selected_checks"] == ["na", "vertical", "forward"]
        names = {r["check"] for r in deps["checks"]}
        assert "upper-subadditivity" not in names

    def test_no_simulation_artifacts_without_simulation(self, tmp_path):
        _, out, _ = run(tmp_path, "verify", "--config", PAIR)
        assert not (out / "trajectories.csv").exists()
        assert not (out / "plot.gp").exists()


class TestDemoConfig:
    def test_simulate_family_and_artifacts(self, tmp_path):
        code, out, report = run(tmp_path, "simulate", "--config", DEMO)
        assert code == 0
        assert report["selected_checks"] == ["slln", "strassen"]
        assert (out / "trajectories.csv").is_file()
        assert "trajectories.csv" in (out / "plot.gp").read_text()
        assert report["experiment"]["upper_exceedance_fraction"] == 0.0
        assert report["negative_control"]["upper_exceedance_fraction"] >= 0.95

    def test_trajectory_csv_shape(self, tmp_path):
        _, out, _ = run(tmp_path, "simulate", "--config", DEMO)
        lines = (out / "trajectories.csv").read_text().splitlines()
        assert lines[0] == "path_id,strategy,n,s_upper,s_lower"
        assert all(len(line.split(",")) == 5 for line in lines[1:])
        # path ids are contiguous and strategy-major
        ids = [int(line.split(",")[0]) for line in lines[1:]]
        assert ids == sorted(ids)

    def test_byte_identical_across_jobs(self, tmp_path):
        _, out1, _ = run(tmp_path / "a", "simulate", "--config", DEMO,
                         "--jobs", "1")
        _, out2, _ = run(tmp_path / "b", "simulate", "--config", DEMO,
                         "--jobs", "4")
        assert (out1 / "report.json").read_bytes() == \
            (out2 / "report.json").read_bytes()
        assert (out1 / "trajectories.csv").read_bytes() == \
            (out2 / "trajectories.csv").read_bytes()

    def test_byte_identical_across_reruns(self, tmp_path):
        _, out1, _ = run(tmp_path / "a", "all", "--config", DEMO)
        _, out2, _ = run(tmp_path / "b", "all", "--config", DEMO)
        assert (out1 / "report.json").read_bytes() == \
            (out2 / "report.json").read_bytes()

    def test_seed_override_changes_paths(self, tmp_path):
        _, out1, r1 = run(tmp_path / "a", "simulate", "--config", DEMO)
        _, out2, r2 = run(tmp_path / "b", "simulate", "--config", DEMO,
                          "--seed", "999")
        assert r1["seed"] != r2["seed"] == 999
        assert (out1 / "trajectories.csv").read_bytes() != \
            (out2 / "trajectories.csv").read_bytes()

    def test_tolerance_override_is_reported(self, tmp_path):
        _, _, report = run(tmp_path, "verify", "--config", DEMO,
                           "--tolerance", "1e-06")
        assert report["tolerance"] == 1e-06


class TestFailureModes:
    def test_missing_config_file(self, tmp_path, capsys):
        assert main(["verify", "--config", str(tmp_path / "nope.json")]) == 2
        assert "not found" in capsys.readouterr().err

    def test_invalid_config_contents(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({
            "model": {"space": 2, "measures": [[0.5, 0.5]],
                      "variables": {"X": [0.0, 1.0]}},
            "checks": ["bogus"],
        }))
        assert main(["verify", "--config", str(bad)]) == 2
        assert "checks[0]" in capsys.readouterr().err

    def test_out_of_range_schedule(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({
            "model": {"space": 2, "measures": [[0.5, 0.5]],
                      "variables": {"X": [0.0, 1.0]}},
            "checks": ["slln"],
            "seed": 1,
            "schedule": {"kind": "kolmogorov", "alpha": 1.0, "beta": 1.7},
        }))
        assert main(["simulate", "--config", str(bad)]) == 2
        assert "beta=1.7" in capsys.readouterr().err

    def test_unexpected_violation_exits_one(self, tmp_path, capsys):
        # the comonotone pair genuinely fails vertical independence; without
        # the expected-violation marker that is a reported failure
        config = tmp_path / "config.json"
        config.write_text(json.dumps({
            "model": {
                "space": 2,
                "measures": [[0.7, 0.3], [0.3, 0.7]],
                "variables": {"Y": [0.0, -1.0], "X": [0.0, 1.0]},
                "joint": "comonotone-pair",
            },
            "checks": ["vertical"],
        }))
        code, out, report = run(tmp_path, "check-deps", "--config",
                                str(config))
        assert code == 1
        assert report["passed"] is False
        captured = capsys.readouterr()
        assert "first failing check: vertical-independence" in captured.err
        assert "RESULT: FAILED" in captured.out
        assert (out / "summary.txt").read_text().count("FAIL") >= 1

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
