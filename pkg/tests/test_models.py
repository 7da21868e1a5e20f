import pytest
import sys
import os

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from pydantic import ValidationError
from rainbow_transversal.models import (LatinArray, ColouredBipartiteGraph, RainbowMatching, MatchedEdge, Subpair,
                                        PipelineParams, DensityParams, ExpansionSpec, InequalityCheck, StageRecord,
                                        FailureReport, StageFailure, AutoResult, GenSpec, ExperimentSpec, ReachState,
                                        RobustPair, PairFile)


def test_latin_array_from_matrix():
    array = LatinArray.from_matrix([[0, 1], [1, 0]])
    assert array.n == 2
    assert array.k == 2
    assert array.grid == [[0, 1], [1, 0]]
    assert array.density == 0.5


def test_latin_array_from_matrix_not_square():
    with pytest.raises(ValueError) as excinfo:
        LatinArray.from_matrix([[0, 1, 2], [1, 2, 0]])

    assert "square matrix" in str(excinfo.value)


def test_graph_rejects_improper_colouring():
    with pytest.raises(ValueError) as excinfo:
        ColouredBipartiteGraph.from_edges(2, 2, [(0, 0, 5), (0, 1, 5)])

    assert "Improper colouring" in str(excinfo.value)


def test_graph_rejects_parallel_edge():
    with pytest.raises(ValueError) as excinfo:
        ColouredBipartiteGraph.from_edges(2, 2, [(0, 0, 1), (0, 0, 2)])

    assert "Parallel edge" in str(excinfo.value)


def test_graph_derivations_keep_index_space(complete4):
    sub = complete4.restrict([1, 2], [0, 3])
    assert sub.size_a == 4 and sub.size_b == 4
    assert sub.rows == [1, 2]
    assert sub.cols == [0, 3]
    assert sub.edge_count == 4
    assert sub.min_degree() == 2

    smaller = complete4.remove_vertices(rows=[0], cols=[0, 1])
    assert smaller.rows == [1, 2, 3]
    assert smaller.cols == [2, 3]
    assert smaller.edge_count == 6
    assert complete4.edge_count == 16


def test_graph_colour_filters(complete4):
    kept = complete4.keep_colours([0, 5])
    assert kept.edge_count == 2
    assert kept.colours() == [0, 5]

    dropped = complete4.drop_colours([0, 5])
    assert dropped.edge_count == 14
    assert dropped.colour_count == 14
    assert not dropped.has_edge(0, 0)
    assert dropped.has_edge(0, 2, 2)


def test_matching_is_rainbow():
    matching = RainbowMatching.from_tuples([(1, 0, 3), (0, 1, 2)])
    assert matching.tuples() == [(0, 1, 2), (1, 0, 3)]
    assert matching.is_rainbow()

    repeated = RainbowMatching.from_tuples([(0, 0, 1), (1, 1, 1)])
    assert not repeated.is_rainbow()


def test_matching_union_and_checked(complete4):
    left = RainbowMatching.from_tuples([(0, 0, 0)])
    right = RainbowMatching.from_tuples([(1, 1, 5)])
    union = left.union(right)
    assert union.size == 2
    assert union.checked(complete4, "TEST") is union

    with pytest.raises(AssertionError) as excinfo:
        RainbowMatching.from_tuples([(0, 0, 1)]).checked(complete4, "TEST")

    assert "outside the graph" in str(excinfo.value)


def test_subpair_helpers():
    pair = Subpair(part_a=frozenset({3, 1}), part_b=frozenset({0, 2}), role="core")
    assert pair.balanced
    assert pair.sizes == (2, 2)
    assert pair.sorted_a() == [1, 3]
    assert pair.within(4, 3)
    assert not pair.within(3, 3)
    assert pair.tagged("other").role == "other"


def test_density_params_defaults():
    params = DensityParams()
    assert params.epsilon == 0.1
    assert params.increment == pytest.approx(1.024)
    assert params.size_exponent < 60


def test_density_params_constant_constraint():
    with pytest.raises(ValidationError) as excinfo:
        DensityParams(c=0.3, c_prime=0.2)

    assert "4c + c'" in str(excinfo.value)


def test_expansion_spec_bound():
    spec = ExpansionSpec.for_core(9)
    assert spec.cap == 6
    assert spec.bound(1) == 2
    assert spec.bound(5) == 6
    assert spec.max_checked_size == 3


def test_pipeline_params_from_camel_case_json():
    params = PipelineParams.model_validate_json('{"reserveExp": 0.3, "minDegCoef": 0.01, "scaled": false}')
    assert params.reserve_exp == 0.3
    assert params.min_deg_coef == 0.01
    assert params.scaled is False
    assert params.theta_exp == 0.66


def test_pipeline_thresholds():
    thresholds = PipelineParams().thresholds(16, 1.0, 8)
    assert thresholds.p == pytest.approx(16 ** -0.32)
    assert thresholds.theta_floor == 17
    assert thresholds.reach_threshold == 17
    assert thresholds.trim_count == 1
    assert thresholds.min_degree_threshold == 1.0
    assert thresholds.reach_step_cap == 8
    assert thresholds.trace_step_cap == 32

    unscaled = PipelineParams(scaled=False).thresholds(16, 1.0, 8)
    assert unscaled.theta_floor == 0
    assert unscaled.min_degree_threshold == pytest.approx(0.008)


def test_inequality_check_slack():
    low = InequalityCheck.at_least("degree", 3, 5)
    assert not low.holds
    assert low.slack == -2

    high = InequalityCheck.at_most("steps", 3, 5)
    assert high.holds
    assert high.slack == 2

    line = StageRecord(name="trim_core", sizes={"A'1": 7}, checks=[low]).log_line()
    assert "stage=trim_core" in line
    assert "A'1=7" in line
    assert "VIOLATED" in line


def test_stage_failure_carries_report():
    report = FailureReport(stage="finish_m3", inequality="|A3| = |B3|", message="unbalanced")
    error = StageFailure(report)
    assert isinstance(error, ValueError)
    assert error.report is report
    assert "[FINISH_M3] unbalanced" in str(error)


def test_auto_result_verdict():
    assert AutoResult(method="exact", authoritative=True).verdict() == "none (exact)"
    assert AutoResult(method="augmenting").verdict() == "none found"
    found = AutoResult(matching=RainbowMatching.from_tuples([(0, 0, 0)]), method="exact")
    assert found.found
    assert found.verdict() == "found (exact)"


def test_gen_spec_validation():
    assert GenSpec(n=4, family="z2k").family == "z2k"

    with pytest.raises(ValidationError) as excinfo:
        GenSpec(n=5, family="z2k")
    assert "even order" in str(excinfo.value)

    with pytest.raises(ValidationError) as excinfo:
        GenSpec(n=3, target_colours=10)
    assert "outside [3, 9]" in str(excinfo.value)


def test_experiment_spec_validation():
    spec = ExperimentSpec.model_validate({"nValues": [4, 8], "colourFractions": [0.5, 1.0], "masterSeed": 9})
    assert spec.n_values == [4, 8]
    assert spec.master_seed == 9
    assert spec.trials == 1
    assert ExperimentSpec.colours_for(8, 0.5) == 32

    with pytest.raises(ValidationError) as excinfo:
        ExperimentSpec(n_values=[4], colour_fractions=[0.1])
    assert "fewer than n colours" in str(excinfo.value)

    with pytest.raises(ValidationError):
        ExperimentSpec(n_values=[4], colour_fractions=[1.0], trials=0)


def test_reach_state_timestamps():
    state = ReachState(m2_colours=frozenset({4, 7}), colour_pool={7: 3}, threshold=1.0)
    assert state.in_pool(1)
    assert state.timestamp(1) == 0
    assert not state.in_pool(4)
    assert state.earlier_than(7, 4)
    assert not state.earlier_than(7, 3)
    assert not state.earlier_than(4, 10)


def test_reach_state_same_phase_colours_are_not_ordered():
    state = ReachState(m2_colours=frozenset({2, 7}), colour_pool={2: 3, 7: 3}, threshold=1.0)
    assert not state.earlier_than(2, 3)
    assert not state.earlier_than(7, 3)
    assert state.earlier_than(2, 4) and state.earlier_than(7, 4)
    assert state.earlier_than(1, 1)
    assert not state.earlier_than(1, 0)


def test_robust_pair_certified():
    pair = Subpair(part_a=frozenset({0, 1}), part_b=frozenset({0, 1}))
    robust = RobustPair(pair=pair, d=1.0, initial_size=2, min_degree_bound=1.0, observed_min_degree=2,
                        expansion=ExpansionSpec.for_core(2), expansion_holds=True, expansion_exact=True)
    assert robust.size == 2
    assert robust.certified
    assert not robust.model_copy(update={"observed_min_degree": 1}).certified


def test_pair_file_round_trip():
    pair = PairFile(part_a=[0, 2], part_b=[1, 3], edge_seed=11, min_degree_bound=1.0)
    assert PairFile.model_validate_json(pair.model_dump_json()) == pair


def test_matched_edge_is_frozen():
    edge = MatchedEdge(row=0, col=1, colour=2)
    assert edge.as_tuple() == (0, 1, 2)
    with pytest.raises(ValidationError):
        edge.row = 3
