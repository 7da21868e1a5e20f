import json
import logging
import pytest
import sys
import os

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from rainbow_transversal.cli import run, build_parser, trial_seed, CSV_COLUMNS
from rainbow_transversal.cli.experiment import ExperimentRunner, TrialTask, run_trial, summarise, rows_csv
from rainbow_transversal.core import parse_latin, parse_matching, read_verdict, parse_pair, validate_latin
from rainbow_transversal.models import ExperimentSpec


def test_count_cyclic3(write_array, cyclic3, capsys):
    assert run(["count", write_array(cyclic3)]) == 0
    assert capsys.readouterr().out.strip() == "3"


def test_count_z4_exit_one(write_array, z4, capsys):
    assert run(["count", write_array(z4)]) == 1
    assert capsys.readouterr().out.strip() == "0"


def test_solve_exact_z4(write_array, z4, capsys):
    assert run(["solve", write_array(z4), "--exact"]) == 1
    assert capsys.readouterr().out.strip() == "none (exact)"


def test_solve_then_verify(write_array, cyclic3, tmp_path, capsys):
    array_path = write_array(cyclic3)
    matching_path = str(tmp_path / "matching.json")
    assert run(["solve", array_path, "--out", matching_path]) == 0
    text = open(matching_path).read()
    assert read_verdict(text) is True
    assert parse_matching(text).size == 3

    assert run(["verify", array_path, matching_path]) == 0
    assert capsys.readouterr().out.strip() == "RAINBOW-PERFECT: yes"


def test_verify_rejects_bad_matching(write_array, cyclic3, tmp_path, capsys):
    matching_path = tmp_path / "bad.json"
    matching_path.write_text('[{"row": 0, "col": 2, "colour": 2}, {"row": 1, "col": 1, "colour": 2}, '
                             '{"row": 2, "col": 0, "colour": 2}]')
    assert run(["verify", write_array(cyclic3), str(matching_path)]) == 1
    assert "RAINBOW-PERFECT: no" in capsys.readouterr().out


def test_solve_prints_matching(write_array, cyclic3, capsys):
    assert run(["solve", write_array(cyclic3), "--exact"]) == 0
    out = capsys.readouterr().out
    assert out.rstrip().endswith("RAINBOW-PERFECT: yes")


def test_gen_writes_valid_array(tmp_path, capsys):
    out = tmp_path / "gen.txt"
    assert run(["gen", "--family", "random", "--n", "6", "--colours", "20", "--seed", "3", "--out", str(out)]) == 0
    array = parse_latin(out.read_text())
    assert array.n == 6
    assert array.k == 20
    assert validate_latin(array).ok

    assert run(["gen", "--family", "cyclic", "--n", "3"]) == 0
    assert capsys.readouterr().out == "3 3\n0 1 2\n1 2 0\n2 0 1\n"


def test_gen_invalid_input(capsys):
    assert run(["gen", "--family", "z2k", "--n", "5"]) == 2
    assert "even order" in capsys.readouterr().err


def test_usage_errors():
    assert run([]) == 2
    assert run(["count"]) == 2
    assert run(["solve", "x.txt", "--exact", "--greedy"]) == 2
    assert run(["--help"]) == 0


def test_missing_file_exit_two(tmp_path, capsys):
    assert run(["count", str(tmp_path / "missing.txt")]) == 2
    assert "does not exist" in capsys.readouterr().err


def test_malformed_file_exit_two(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("2 2\n0 0\n1 1\n")
    assert run(["solve", str(path)]) == 2
    assert "Invalid Latin array" in capsys.readouterr().err


def test_internal_assertion_exit_three(write_array, cyclic3, monkeypatch, capsys):
    def broken(*args, **kwargs):
        raise AssertionError("[TEST] broken invariant")

    monkeypatch.setattr("rainbow_transversal.cli.cli.count_transversals", broken)
    assert run(["count", write_array(cyclic3)]) == 3
    assert "broken invariant" in capsys.readouterr().err


def test_verify_usage(write_array, cyclic3):
    assert run(["verify", write_array(cyclic3)]) == 2
    assert run(["verify", "robust-pair", write_array(cyclic3)]) == 2


def test_pipeline_with_log_and_pair(write_array, all_distinct16, tmp_path, capsys):
    array_path = write_array(all_distinct16)
    log_path = tmp_path / "stages.log"
    pair_path = tmp_path / "pair.json"
    out_path = tmp_path / "matching.json"
    code = run(["pipeline", array_path, "--seed", "1", "--log", str(log_path), "--pair-out", str(pair_path),
                "--out", str(out_path)])
    assert code == 0
    assert read_verdict(out_path.read_text()) is True
    log = log_path.read_text()
    assert "stage=prune_to_robust" in log
    assert "stage=assemble" in log

    pair = parse_pair(pair_path.read_text())
    assert len(pair.part_a) == len(pair.part_b) == 8
    assert run(["verify", "robust-pair", array_path, str(pair_path)]) == 0
    assert "min degree" in capsys.readouterr().out


def test_pipeline_log_ignores_quiet_root_level(write_array, all_distinct16, tmp_path):
    root = logging.getLogger()
    previous = root.level
    console_levels = [h.level for h in root.handlers]
    root.setLevel(logging.WARNING)
    try:
        log_path = tmp_path / "stages.log"
        assert run(["pipeline", write_array(all_distinct16), "--seed", "1", "--log", str(log_path)]) == 0
        assert "stage=assemble" in log_path.read_text()
        assert root.level == logging.WARNING
        assert [h.level for h in root.handlers] == console_levels
    finally:
        root.setLevel(previous)


def test_verify_robust_pair_rejects_weak_pair(write_array, cyclic3, tmp_path, capsys):
    pair_path = tmp_path / "pair.json"
    pair_path.write_text(json.dumps({"part_a": [0, 1, 2], "part_b": [0, 1, 2], "edge_seed": 0,
                                     "min_degree_bound": 1.0}))
    assert run(["verify", "robust-pair", write_array(cyclic3), str(pair_path)]) == 1
    assert "FAILED" in capsys.readouterr().out


def test_trial_seed_stable():
    assert trial_seed(1, 8, 0, 0) == trial_seed(1, 8, 0, 0)
    assert trial_seed(1, 8, 0, 0) != trial_seed(1, 8, 0, 1)
    assert trial_seed(1, 8, 0, 0) != trial_seed(2, 8, 0, 0)


def test_run_trial_exact_all_distinct():
    row = run_trial(TrialTask(n=5, d=1.0, k=25, seed=4, solver="exact", omit_timing=True))
    assert row.success
    assert row.size == 5
    assert row.wall_ms == 0
    assert row.stage_failed == ""


def test_run_trial_greedy_reports_size():
    row = run_trial(TrialTask(n=6, d=1 / 6, k=6, seed=2, solver="greedy"))
    assert 1 <= row.size <= 6
    assert row.success == (row.size == 6)


def _spec_file(tmp_path, **overrides):
    spec = {"nValues": [4, 5], "colourFractions": [0.5, 1.0], "trials": 2, "masterSeed": 7, "solver": "exact"}
    spec.update(overrides)
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    return str(path)


def test_experiment_csv_deterministic(tmp_path):
    spec_path = _spec_file(tmp_path)
    first, second = tmp_path / "first.csv", tmp_path / "second.csv"
    assert run(["experiment", spec_path, "--out", str(first), "--omit-timing"]) == 0
    assert run(["experiment", spec_path, "--out", str(second), "--omit-timing"]) == 0
    assert first.read_text() == second.read_text()

    lines = first.read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + 2 * 2 * 2
    assert (tmp_path / "first.csv.summary.csv").exists()


def test_experiment_json_aggregates_match_rows(tmp_path):
    out = tmp_path / "results.json"
    assert run(["experiment", _spec_file(tmp_path), "--out", str(out), "--format", "json"]) == 0
    data = json.loads(out.read_text())
    assert data["columns"] == CSV_COLUMNS
    assert len(data["rows"]) == 8
    for cell in data["aggregates"]:
        rows = [r for r in data["rows"] if r["n"] == cell["n"] and r["d"] == cell["d"]]
        assert cell["trials"] == len(rows)
        assert cell["successes"] == sum(r["success"] for r in rows)
        assert cell["mean_size"] == pytest.approx(sum(r["size"] for r in rows) / len(rows))
    full = [cell for cell in data["aggregates"] if cell["d"] == 1.0]
    assert all(cell["success_rate"] == 1.0 for cell in full)


def test_experiment_order_independent_of_workers(tmp_path):
    spec = ExperimentSpec(n_values=[4], colour_fractions=[1.0], trials=3, master_seed=1, solver="exact")
    serial = ExperimentRunner(spec, workers=1, omit_timing=True).run()
    pooled = ExperimentRunner(spec, workers=2, omit_timing=True).run()
    assert rows_csv(serial) == rows_csv(pooled)
    assert summarise(serial.rows) == serial.aggregates


def test_experiment_stdout(tmp_path, capsys):
    assert run(["experiment", _spec_file(tmp_path, nValues=[4], trials=1), "--omit-timing"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == ",".join(CSV_COLUMNS)


def test_experiment_invalid_spec(tmp_path, capsys):
    assert run(["experiment", _spec_file(tmp_path, colourFractions=[0.01])]) == 2
    assert "fewer than n colours" in capsys.readouterr().err


def test_parser_subcommands():
    parser = build_parser()
    args = parser.parse_args(["solve", "file.txt", "--pipeline", "--seed", "4"])
    assert args.pipeline
    assert args.seed == 4
    assert args.command == "solve"
