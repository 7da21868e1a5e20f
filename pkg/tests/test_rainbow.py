import math
import pytest
import sys
import os
import numpy as np

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from rainbow_transversal.core import to_graph
from rainbow_transversal.generators import cyclic_latin, z2k_table, random_latin, split_colours
from rainbow_transversal.models import (ColouredBipartiteGraph, RainbowMatching, Subpair, PipelineParams,
                                        StageFailure, NO_EDGE)
from rainbow_transversal.oracle import max_rainbow_matching_exact
from rainbow_transversal.rainbow import (greedy_rainbow, build_reach, trace_back, augmenting_rainbow,
                                         AugmentingRainbow, TraceBack, size_benchmark, reserve_colours, trim_core,
                                         classify_hard_leftovers, greedy_m0, finish_m3, finish_checks, final_core)


@pytest.fixture
def simple_instance():
    graph = ColouredBipartiteGraph.from_edges(2, 2, [(0, 1, 20), (1, 1, 10), (1, 0, 21)])
    m2 = RainbowMatching.from_tuples([(1, 1, 10)])
    return graph, m2


@pytest.fixture
def chained_instance():
    edges = [(1, 1, 10), (2, 2, 20), (0, 1, 20), (3, 2, 30), (1, 0, 40)]
    graph = ColouredBipartiteGraph.from_edges(4, 4, edges)
    m2 = RainbowMatching.from_tuples([(1, 1, 10), (2, 2, 20)])
    return graph, m2


def _complete(size):
    return ColouredBipartiteGraph.from_pairs(size, size, [(a, b) for a in range(size) for b in range(size)])


def test_greedy_rainbow_complete():
    graph = _complete(5)
    for seed in range(3):
        matching = greedy_rainbow(graph, seed)
        assert matching.size == 5
        assert matching.is_rainbow()


def test_greedy_rainbow_is_maximal(cyclic3_graph):
    matching = greedy_rainbow(cyclic3_graph, 4)
    assert matching.is_rainbow()
    assert matching.lies_in(cyclic3_graph)
    used_rows, used_cols, used_colours = set(matching.rows()), set(matching.cols()), set(matching.colours())
    for a, b, colour in cyclic3_graph.edges():
        assert a in used_rows or b in used_cols or colour in used_colours


def test_build_reach_simple(simple_instance):
    graph, m2 = simple_instance
    reach = build_reach(graph, m2, [0], [0], threshold=1, step_cap=4)
    assert reach.terminated_with == "intersection"
    assert reach.r_a == {1: 1}
    assert reach.r_b == {1: 2}
    assert reach.steps == 1
    assert reach.intersection.as_tuple() == (1, 1, 10)
    assert reach.colour_pool == {10: 1}


def test_build_reach_chained(chained_instance):
    graph, m2 = chained_instance
    reach = build_reach(graph, m2, [0, 3], [0, 3], threshold=1, step_cap=4)
    assert reach.terminated_with == "intersection"
    assert reach.r_a == {2: 1, 1: 3}
    assert reach.r_b == {1: 2}
    assert reach.colour_pool == {20: 1, 10: 2}
    assert reach.steps == 2
    assert reach.intersection.row == 1
    assert reach.step_log[0].added_a == [2]
    assert reach.step_log[0].added_b == [1]


def test_build_reach_step_cap(chained_instance):
    graph, m2 = chained_instance
    reach = build_reach(graph, m2, [0, 3], [0, 3], threshold=1, step_cap=1)
    assert reach.terminated_with == "step cap"
    assert reach.intersection is None


def test_build_reach_threshold_stalls(simple_instance):
    graph, m2 = simple_instance
    reach = build_reach(graph, m2, [0], [0], threshold=2, step_cap=4)
    assert reach.terminated_with == "stalled"
    assert reach.r_a == {}
    assert reach.r_b == {}


def test_trace_back_simple(simple_instance):
    graph, m2 = simple_instance
    reach = build_reach(graph, m2, [0], [0], threshold=1, step_cap=4)
    engine = TraceBack(graph, m2, reach)
    grown = engine.run()
    assert grown.tuples() == [(0, 1, 20), (1, 0, 21)]
    assert engine.steps == 0


def test_trace_back_chained(chained_instance):
    graph, m2 = chained_instance
    reach = build_reach(graph, m2, [0, 3], [0, 3], threshold=1, step_cap=4)
    engine = TraceBack(graph, m2, reach, step_cap=4)
    grown = engine.run()
    assert grown.tuples() == [(0, 1, 20), (1, 0, 40), (3, 2, 30)]
    assert grown.size == m2.size + 1
    assert engine.steps == 1
    assert grown.is_rainbow()


def test_trace_back_uses_each_side_join_phase():
    # colour 20 enters C in the A-phase that also admits (1, 1, 10) to R^A
    edges = [(1, 1, 10), (2, 2, 20), (0, 1, 31), (0, 2, 30), (3, 2, 32), (1, 0, 20)]
    graph = ColouredBipartiteGraph.from_edges(4, 4, edges)
    m2 = RainbowMatching.from_tuples([(1, 1, 10), (2, 2, 20)])
    reach = build_reach(graph, m2, [0, 3], [0, 3], threshold=1, step_cap=4)
    assert reach.r_a == {1: 1, 2: 1}
    assert reach.r_b == {1: 2}
    assert reach.colour_pool == {10: 1, 20: 1}
    engine = TraceBack(graph, m2, reach)
    grown = engine.run()
    assert grown.tuples() == [(0, 1, 31), (1, 0, 20), (3, 2, 32)]
    assert engine.steps == 1


def test_trace_back_step_cap(chained_instance):
    graph, m2 = chained_instance
    reach = build_reach(graph, m2, [0, 3], [0, 3], threshold=1, step_cap=4)
    with pytest.raises(StageFailure) as excinfo:
        trace_back(graph, m2, reach, step_cap=0)

    assert excinfo.value.report.stage == "trace_back"


def test_trace_back_requires_intersection(simple_instance):
    graph, m2 = simple_instance
    reach = build_reach(graph, m2, [0], [0], threshold=2, step_cap=4)
    with pytest.raises(ValueError) as excinfo:
        trace_back(graph, m2, reach)

    assert "not an intersection edge" in str(excinfo.value)


def test_augmentation_relaxes_threshold():
    graph = ColouredBipartiteGraph.from_edges(2, 2, [(1, 0, 10), (1, 1, 21), (0, 0, 20)])
    engine = AugmentingRainbow(graph, 0)
    assert engine._schedule() == [5, 2, 1]
    grown = engine._augment(RainbowMatching.from_tuples([(1, 0, 10)]))
    assert grown.tuples() == [(0, 0, 20), (1, 1, 21)]
    assert len(engine.records) == 1
    assert engine.records[0].threshold == 1
    assert engine.records[0].replacement_steps == 0


def test_augmenting_rainbow_reaches_perfect():
    graph = ColouredBipartiteGraph.from_edges(2, 2, [(1, 0, 10), (1, 1, 21), (0, 0, 20)])
    for seed in range(4):
        assert augmenting_rainbow(graph, seed).size == 2


def test_augmenting_rainbow_never_shrinks_greedy():
    rng = np.random.default_rng(9)
    matrix = np.where(rng.random((10, 10)) < 0.4, np.arange(100).reshape(10, 10), NO_EDGE)
    graph = ColouredBipartiteGraph(matrix)
    for seed in range(3):
        grown = augmenting_rainbow(graph, seed)
        assert grown.size >= greedy_rainbow(graph, seed).size
        assert grown.is_rainbow()
        assert grown.lies_in(graph)


def test_augmenting_rainbow_from_truncated_start():
    graph = _complete(12)
    start = RainbowMatching.from_tuples(greedy_rainbow(graph, 0).tuples()[:6])
    engine = AugmentingRainbow(graph, 0, start=start)
    grown = engine.run()
    assert grown.size == 12
    assert len(engine.records) == 6
    assert [r.input_size for r in engine.records] == list(range(6, 12))
    assert all(r.output_size == r.input_size + 1 for r in engine.records)
    assert grown.is_rainbow()
    assert grown.lies_in(graph)


def test_augmenting_rainbow_rejects_foreign_start():
    graph = ColouredBipartiteGraph.from_edges(2, 2, [(0, 0, 1)])
    with pytest.raises(ValueError) as excinfo:
        AugmentingRainbow(graph, 0, start=RainbowMatching.from_tuples([(1, 1, 5)])).run()

    assert "[AUGMENTING RAINBOW]" in str(excinfo.value)


def _small_instances():
    yield to_graph(z2k_table(2))
    yield to_graph(z2k_table(3))
    for seed in range(4):
        yield to_graph(random_latin(7, seed)).drop_colours(range(3))
        yield to_graph(split_colours(random_latin(8, seed), 16, seed)).drop_colours(range(0, 16, 2))


def test_no_augmentation_beyond_maximum():
    for graph in _small_instances():
        m2 = max_rainbow_matching_exact(graph)
        engine = AugmentingRainbow(graph, 0, start=m2)
        assert engine.run().size == m2.size
        assert engine.records == []

        a0 = [a for a in graph.rows if a not in set(m2.rows())]
        b0 = [b for b in graph.cols if b not in set(m2.cols())]
        for threshold in (1, 2, 3):
            reach = build_reach(graph, m2, a0, b0, threshold, 20)
            if reach.terminated_with == "intersection":
                with pytest.raises(StageFailure):
                    trace_back(graph, m2, reach)


def test_size_benchmark():
    assert size_benchmark(8) == pytest.approx(0.0)
    assert size_benchmark(27) == pytest.approx(9.0)


def test_reserve_colours_split():
    graph = _complete(6)
    core = Subpair(part_a=frozenset({0, 1, 2}), part_b=frozenset({0, 1, 2}))
    split = reserve_colours(graph, core, 0.5, 7)
    assert split.gr.edge_count == len(split.reserved_colours)
    assert split.gr.edge_count + graph.drop_colours(split.reserved_colours).edge_count == 36
    assert split.g_star.rows == [3, 4, 5]
    assert split.g_star.cols == [3, 4, 5]
    assert not set(c for _, _, c in split.g_star.edges()) & split.reserved_colours
    assert split == reserve_colours(graph, core, 0.5, 7)


def test_reserve_colours_zero_probability():
    graph = _complete(4)
    core = Subpair(part_a=frozenset({0, 1}), part_b=frozenset({0, 1}))
    split = reserve_colours(graph, core, 0.0, 1)
    assert split.reserved_colours == frozenset()
    assert split.gr.edge_count == 0
    assert split.g_star.edge_count == 4


def test_reserve_colours_invalid_probability():
    with pytest.raises(ValueError) as excinfo:
        reserve_colours(_complete(2), Subpair(), 1.0, 0)

    assert "[RESERVE COLOURS]" in str(excinfo.value)


def test_reserve_colours_ignores_colour_ids():
    graph = _complete(6)
    permuted = ColouredBipartiteGraph(np.where(graph.present, 35 - graph.colour_matrix, NO_EDGE))
    core = Subpair(part_a=frozenset({0, 1}), part_b=frozenset({0, 1}))
    first = reserve_colours(graph, core, 0.4, 3).gr
    second = reserve_colours(permuted, core, 0.4, 3).gr
    assert np.array_equal(first.present, second.present)


def test_reserve_colours_concentration():
    graph = to_graph(split_colours(random_latin(12, 0), 100, 0))
    core = Subpair(part_a=frozenset(range(6)), part_b=frozenset(range(6)))
    k, p = graph.colour_count, 0.3
    sigma = math.sqrt(k * p * (1 - p))
    counts, degrees = [], []
    for seed in range(100):
        split = reserve_colours(graph, core, p, seed)
        counts.append(len(split.reserved_colours))
        degrees.append(split.mean_degree_b)
    assert sum(abs(c - p * k) > 3 * sigma for c in counts) <= 3
    assert abs(np.mean(counts) - p * k) < 4 * sigma / 10
    # each column meets A1 in six distinct colours
    assert abs(np.mean(degrees) - p * 6) < 0.45


def test_trim_core_removes_lowest_index():
    g1 = _complete(6)
    thresholds = PipelineParams().thresholds(12, 1.0, 6)
    trimmed = trim_core(g1, RainbowMatching(), thresholds)
    assert trimmed.removed_a == [0]
    assert trimmed.removed_b == [0]
    assert trimmed.pair.part_a == frozenset(range(1, 6))
    assert trimmed.min_degree == 5
    assert trimmed.heavy_a == 0


def test_trim_core_prefers_heavy_losers():
    g1 = _complete(6)
    thresholds = PipelineParams(scaled=False).thresholds(12, 1.0, 6)
    # colour 7 sits on edge (1, 1)
    trimmed = trim_core(g1, RainbowMatching.from_tuples([(9, 9, 7)]), thresholds)
    assert trimmed.removed_a == [1]
    assert trimmed.removed_b == [1]
    assert trimmed.heavy_a == 1
    assert trimmed.heavy_b == 1


def test_trim_core_failure():
    g1 = ColouredBipartiteGraph.from_edges(3, 3, [(0, 1, 0), (1, 0, 1), (2, 2, 2)])
    thresholds = PipelineParams().thresholds(6, 1.0, 3)
    with pytest.raises(StageFailure) as excinfo:
        trim_core(g1, RainbowMatching(), thresholds)

    assert excinfo.value.report.stage == "trim_core"


def test_classify_hard_leftovers():
    full = _complete(4)
    core = Subpair(part_a=frozenset({2, 3}), part_b=frozenset({2, 3}))
    # colours 2 and 3 are the edges (0, 2) and (0, 3)
    m2 = RainbowMatching.from_tuples([(8, 8, 2), (9, 9, 3)])
    hard = classify_hard_leftovers(full, [0], [0], core, m2)
    assert hard.part_a == frozenset({0})
    assert hard.part_b == frozenset()


def test_greedy_m0_matches_leftovers():
    full = _complete(4)
    core = Subpair(part_a=frozenset({2, 3}), part_b=frozenset({2, 3}))
    m0 = greedy_m0(full.keep_colours([]), full, [0], [0], Subpair(), core, RainbowMatching(), 5)
    assert m0.size == 2
    assert m0.is_rainbow()
    rows = set(m0.rows())
    cols = set(m0.cols())
    assert 0 in rows and 0 in cols
    assert len(rows & {2, 3}) == 1
    assert len(cols & {2, 3}) == 1


def test_greedy_m0_hard_vertex_needs_reserved_colour():
    full = _complete(4)
    core = Subpair(part_a=frozenset({2, 3}), part_b=frozenset({2, 3}))
    hard = Subpair(part_a=frozenset({0}))
    with pytest.raises(StageFailure) as excinfo:
        greedy_m0(full.keep_colours([]), full, [0], [], hard, core, RainbowMatching(), 5)

    assert excinfo.value.report.stage == "greedy_m0"
    assert excinfo.value.report.details["phase"] == "reserved"


def test_finish_m3_perfect():
    thresholds = PipelineParams().thresholds(12, 1.0, 6)
    trimmed = trim_core(_complete(6), RainbowMatching(), thresholds)
    m3 = finish_m3(trimmed, RainbowMatching(), thresholds)
    assert m3.size == 5
    assert m3.is_rainbow()


def test_finish_m3_after_m0():
    thresholds = PipelineParams().thresholds(12, 1.0, 6)
    trimmed = trim_core(_complete(6), RainbowMatching(), thresholds)
    # edge (0, 1) has colour 1, edge (1, 0) has colour 6
    m0 = RainbowMatching.from_tuples([(0, 1, 1), (1, 0, 6)])
    g3 = final_core(trimmed, m0)
    assert g3.rows == [2, 3, 4, 5]
    assert g3.cols == [2, 3, 4, 5]
    assert finish_m3(trimmed, m0, thresholds).size == 4


def test_finish_m3_unbalanced():
    thresholds = PipelineParams().thresholds(12, 1.0, 6)
    trimmed = trim_core(_complete(6), RainbowMatching(), thresholds)
    with pytest.raises(StageFailure) as excinfo:
        finish_m3(trimmed, RainbowMatching.from_tuples([(0, 1, 1)]), thresholds)

    assert excinfo.value.report.inequality == "|A3| = |B3|"


def test_finish_checks_after_m0():
    thresholds = PipelineParams().thresholds(12, 1.0, 6)
    trimmed = trim_core(_complete(6), RainbowMatching(), thresholds)
    m0 = RainbowMatching.from_tuples([(0, 1, 1), (1, 0, 6)])
    # row 0 and column 0 sit outside the trimmed core, so |A0| = 1
    degree, identity = finish_checks(trimmed, m0, 1, thresholds)
    assert degree.holds
    assert degree.lhs == 4
    assert identity.holds
    assert identity.lhs == identity.rhs == 4

    _, off_by_one = finish_checks(trimmed, m0, 2, thresholds)
    assert not off_by_one.holds
    assert off_by_one.slack == 1


def test_finish_checks_empty_core():
    thresholds = PipelineParams().thresholds(12, 1.0, 2)
    trimmed = trim_core(_complete(2), RainbowMatching(), thresholds)
    assert trimmed.pair.part_a == frozenset({1})
    degree, identity = finish_checks(trimmed, RainbowMatching.from_tuples([(1, 1, 3)]), 1, thresholds)
    assert not degree.holds
    assert identity.holds
