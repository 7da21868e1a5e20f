import sys
import os
import json

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import rainbow_transversal
from rainbow_transversal.cli import run
from rainbow_transversal.core import read_text, parse_matching, read_verdict, to_graph, verify_rainbow_perfect
from rainbow_transversal.generators import generate
from rainbow_transversal.models import GenSpec


def test_gen_count_solve_verify(tmp_path, capsys):
    array_path = str(tmp_path / "cyclic5.txt")
    matching_path = str(tmp_path / "cyclic5.match")

    assert run(["gen", "--family", "cyclic", "--n", "5", "--out", array_path]) == 0
    assert run(["count", array_path]) == 0
    assert capsys.readouterr().out.strip() == "15"

    assert run(["solve", array_path, "--out", matching_path]) == 0
    text = read_text(matching_path, "TEST")
    assert read_verdict(text) is True
    assert parse_matching(text).size == 5

    assert run(["verify", array_path, matching_path]) == 0
    assert capsys.readouterr().out.strip() == "RAINBOW-PERFECT: yes"


def test_z2k_reports_none(tmp_path, capsys):
    array_path = str(tmp_path / "z6.txt")
    assert run(["gen", "--family", "z2k", "--n", "6", "--out", array_path]) == 0
    capsys.readouterr()
    assert run(["count", array_path]) == 1
    assert capsys.readouterr().out.strip() == "0"
    assert run(["solve", array_path]) == 1
    assert capsys.readouterr().out.strip() == "none (exact)"


def test_package_api_round_trip(tmp_path, write_array):
    array = generate(GenSpec(n=7, target_colours=20, family="split", seed=11))
    loaded = rainbow_transversal.load_array(write_array(array))
    assert loaded == array

    result = rainbow_transversal.solve(loaded, seed=2)
    assert result.authoritative
    if result.found:
        assert rainbow_transversal.verify(loaded, result.matching)
        assert rainbow_transversal.count(loaded) > 0
    else:
        assert rainbow_transversal.count(loaded) == 0


def test_pipeline_end_to_end(tmp_path, all_distinct16, write_array):
    array_path = write_array(all_distinct16)
    matching_path = str(tmp_path / "out.match")
    pair_path = str(tmp_path / "core.pair")
    log_path = str(tmp_path / "stages.log")

    code = run(["pipeline", array_path, "--seed", "1", "--log", log_path, "--pair-out", pair_path,
                "--out", matching_path])
    assert code == 0

    matching = parse_matching(read_text(matching_path, "TEST"))
    assert verify_rainbow_perfect(to_graph(all_distinct16), matching)

    pair = json.loads(read_text(pair_path, "TEST"))
    assert len(pair["part_a"]) == len(pair["part_b"])
    assert "[PIPELINE]" in read_text(log_path, "TEST")

    assert run(["verify", "robust-pair", array_path, pair_path]) == 0


def test_experiment_end_to_end(tmp_path):
    spec_path = tmp_path / "sweep.json"
    out_path = str(tmp_path / "sweep.csv")
    spec_path.write_text(json.dumps({"nValues": [5], "colourFractions": [0.4, 1.0], "trials": 2, "masterSeed": 3,
                                     "solver": "exact"}))

    assert run(["experiment", str(spec_path), "--out", out_path, "--omit-timing"]) == 0
    lines = read_text(out_path, "TEST").strip().splitlines()
    assert lines[0] == "n,d,k,seed,solver,success,size,stage_failed,wall_ms"
    assert len(lines) == 5
    assert os.path.exists(f"{out_path}.summary.csv")
