import math
from typing import List, Optional
import numpy as np
from ..configs.logger import logging
from ..core import to_graph, one_edge_per_colour, verify_rainbow_perfect
from ..models import (LatinArray, ColouredBipartiteGraph, RainbowMatching, Subpair, PipelineParams,
                      StageThresholds, PipelineResult, StageRecord, InequalityCheck, StageFailure, AutoResult,
                      FailureReport, MatchingVerificationError)
from ..oracle import find_transversal_exact
from ..robust import dense_subpair, balance_pair, prune_to_robust
from .reservation import reserve_colours
from .augmentation import AugmentingRainbow, greedy_rainbow, size_benchmark
from .assembly import trim_core, classify_hard_leftovers, greedy_m0, finish_m3, finish_checks

EXACT_ORDER_LIMIT = 9


def _seed_int(sequence: np.random.SeedSequence) -> int:
    return int(sequence.generate_state(1)[0])


class RainbowPipeline:
    """
    Staged construction of a rainbow perfect matching:
    one edge per colour, dense subpair, robust core, colour reservation, M2 by
    augmentation on G*, trimmed core, M0 greedy completion, M3 by bipartite matching.

    Every stage records its sizes and working inequalities; a stage that cannot
    meet its inequality raises StageFailure, which `run` turns into the result's
    failure report.
    """

    def __init__(self, array: LatinArray, params: Optional[PipelineParams] = None, seed: int = 0):
        self.array = array
        self.params = params or PipelineParams()
        self.seed = seed
        self.result = PipelineResult(seed=seed)
        children = np.random.SeedSequence(seed).spawn(6)
        self.edge_seed = _seed_int(children[0])
        self.density_seed = _seed_int(children[1])
        self.prune_seed = _seed_int(children[2])
        self.reserve_rng = np.random.default_rng(children[3])
        self.augment_rng = np.random.default_rng(children[4])
        self.m0_rng = np.random.default_rng(children[5])

    def _check_array(self):
        if self.array.k < self.array.n:
            raise ValueError(f"[PIPELINE] Need at least n={self.array.n} colours, got {self.array.k}.")

    def _record(self, name: str, sizes: dict, checks: Optional[List[InequalityCheck]] = None,
                notes: Optional[List[str]] = None) -> None:
        record = StageRecord(name=name, sizes=sizes, checks=checks or [], notes=notes or [])
        self.result.stages.append(record)
        logging.info(f"[PIPELINE] {record.log_line()}")

    def _core(self, graph: ColouredBipartiteGraph, d: float) -> Subpair:
        params = self.params
        dense = dense_subpair(graph, params.density, d, params.density_exact_limit, params.density_samples,
                              self.density_seed)
        self._record("dense_subpair", {"A'": len(dense.pair.part_a), "B'": len(dense.pair.part_b),
                                       "iterations": dense.iterations},
                     [InequalityCheck.at_most("iterations", dense.iterations, dense.iteration_bound),
                      InequalityCheck.at_least("|A'| size floor", len(dense.pair.part_a), dense.size_floor)],
                     [f"density={dense.density:.4g}", f"check={'exact' if dense.exact else 'sampled'}"])
        pair = dense.pair
        if params.scaled and params.core_fraction is not None:
            cap = math.ceil(params.core_fraction * self.array.n)
            if len(pair.part_a) > cap:
                pair = balance_pair(graph, pair.part_a, pair.part_b, cap)
                self._record("core_cap", {"A'": len(pair.part_a), "B'": len(pair.part_b)})
        return pair

    def _run(self) -> RainbowMatching:
        params, state = self.params, self.result.state
        self._check_array()
        graph = to_graph(self.array)
        n, k = self.array.n, self.array.k
        d = k / (n * n)
        self._record("input", {"n": n, "k": k},
                     [InequalityCheck.at_least("d > n^(-1/200)", d, params.d_min(n))])

        g = one_edge_per_colour(graph, self.edge_seed)
        state.edge_seed = self.edge_seed
        self._record("one_edge_per_colour", {"edges": g.edge_count},
                     [InequalityCheck.at_least("e(G) >= d n^2", g.edge_count, d * n * n)])

        pair = self._core(g, d)
        robust = prune_to_robust(g, pair, d, params, seed=self.prune_seed)
        core = robust.pair
        state.core = core
        state.min_degree_bound = robust.min_degree_bound
        thresholds = params.thresholds(n, d, robust.size)
        self._record("prune_to_robust", {"A1": robust.size, "deleted": robust.initial_size - robust.size},
                     [InequalityCheck.at_least("min degree", robust.observed_min_degree, robust.min_degree_bound)],
                     [f"expansion={'exact' if robust.expansion_exact else 'heuristic'}"])

        reservation = reserve_colours(graph, core, thresholds.p, self.reserve_rng)
        self._record("reserve_colours", {"reserved": len(reservation.reserved_colours),
                                         "G*": len(reservation.g_star.rows)},
                     [InequalityCheck.at_most("B-vertices outside reserved band", reservation.outside_band_b,
                                              0.01 * n)])

        augmenter = AugmentingRainbow(reservation.g_star, self.augment_rng, params, thresholds)
        m2 = augmenter.run()
        state.m2 = m2
        log_n = math.log2(max(n, 2))
        benchmark = size_benchmark(reservation.g_star.min_degree()) if reservation.g_star.rows else 0.0
        self._record("augmenting_rainbow", {"M2": m2.size, "augmentations": len(augmenter.records)},
                     [InequalityCheck.at_least("|M2| >= delta - 2 delta^(2/3)", m2.size, benchmark),
                      InequalityCheck.at_most("reach steps", max((r.reach_steps for r in augmenter.records), default=0),
                                              log_n),
                      InequalityCheck.at_most("replacement steps",
                                              max((r.replacement_steps for r in augmenter.records), default=0),
                                              4 * log_n)])

        g1 = g.restrict(core.part_a, core.part_b)
        trimmed = trim_core(g1, m2, thresholds)
        state.trimmed_core = trimmed.pair
        heavy_cap = 1e4 * n / (d * robust.size)
        self._record("trim_core", {"A'1": len(trimmed.pair.part_a), "min degree": trimmed.min_degree},
                     [InequalityCheck.at_most("heavy losers per side", max(trimmed.heavy_a, trimmed.heavy_b),
                                              heavy_cap),
                      InequalityCheck.at_least("min degree", trimmed.min_degree, thresholds.trimmed_min_degree)])

        a2, b2 = set(m2.rows()), set(m2.cols())
        state.a2b2 = Subpair(part_a=frozenset(a2), part_b=frozenset(b2), role="M2 vertices")
        a0 = [a for a in graph.rows if a not in trimmed.pair.part_a and a not in a2]
        b0 = [b for b in graph.cols if b not in trimmed.pair.part_b and b not in b2]
        state.leftovers = Subpair(part_a=frozenset(a0), part_b=frozenset(b0), role="leftovers")
        if len(a0) != len(b0):
            raise MatchingVerificationError(f"[PIPELINE] Leftover sets differ in size: {len(a0)} vs {len(b0)}.")
        hard = classify_hard_leftovers(graph, a0, b0, trimmed.pair, m2)
        state.hard_leftovers = hard
        quarter = thresholds.p * robust.size / 4
        self._record("classify_hard_leftovers", {"A0": len(a0), "A'0": len(hard.part_a), "B'0": len(hard.part_b)},
                     [InequalityCheck.at_most("|A0| < 2 trimCoef d |A1|", len(a0), 2 * params.trim_coef * d * robust.size),
                      InequalityCheck.at_most("|A'0| <= p|A1|/4", len(hard.part_a), quarter),
                      InequalityCheck.at_most("|B'0| <= p|A1|/4", len(hard.part_b), quarter)])

        m0 = greedy_m0(reservation.gr, graph, a0, b0, hard, trimmed.pair, m2, self.m0_rng)
        state.m0 = m0
        self._record("greedy_m0", {"M0": m0.size})

        state.final_core = Subpair(part_a=frozenset(trimmed.pair.part_a - set(m0.rows())),
                                   part_b=frozenset(trimmed.pair.part_b - set(m0.cols())), role="final core")
        checks = finish_checks(trimmed, m0, len(a0), thresholds)
        m3 = finish_m3(trimmed, m0, thresholds)
        state.m3 = m3
        self._record("finish_m3", {"A3": len(state.final_core.part_a), "M3": m3.size}, checks)

        matching = m2.union(m0, m3)
        if not verify_rainbow_perfect(graph, matching):
            raise MatchingVerificationError("[PIPELINE] Assembled M2 u M0 u M3 is not a rainbow perfect matching.")
        self._record("assemble", {"matching": matching.size})
        return matching

    def run(self) -> PipelineResult:
        try:
            self.result.matching = self._run()
        except StageFailure as e:
            self.result.failure = e.report
            logging.info(f"[PIPELINE] Stage {e.report.stage} failed: {e.report.message or e.report.inequality}")
        return self.result


def solve_pipeline(array: LatinArray, params: Optional[PipelineParams] = None, seed: int = 0) -> PipelineResult:
    return RainbowPipeline(array, params, seed).run()


def solve_auto(array: LatinArray, seed: int = 0, params: Optional[PipelineParams] = None,
               restarts: int = 3) -> AutoResult:
    """
    Exact search for n <= 9, otherwise the scaled pipeline and then augmentation on
    fresh one-edge-per-colour samples. Only the exact path can certify absence.
    """
    if array.n <= EXACT_ORDER_LIMIT:
        return AutoResult(matching=find_transversal_exact(array), method="exact", authoritative=True)
    params = (params or PipelineParams()).model_copy(update={"scaled": True})
    result = solve_pipeline(array, params, seed)
    if result.success:
        return AutoResult(matching=result.matching, method="pipeline")
    failures: List[FailureReport] = [result.failure] if result.failure else []

    graph = to_graph(array)
    n = array.n
    thresholds = params.thresholds(n, array.k / (n * n), n)
    for sequence in np.random.SeedSequence(seed).spawn(restarts):
        edge_rng, augment_rng = (np.random.default_rng(s) for s in sequence.spawn(2))
        candidate = AugmentingRainbow(one_edge_per_colour(graph, edge_rng), augment_rng, params, thresholds).run()
        if verify_rainbow_perfect(graph, candidate):
            return AutoResult(matching=candidate, method="augmenting", failures=failures)
    logging.info(f"[SOLVE AUTO] No transversal found for n={n} after {restarts} augmentation restarts.")
    return AutoResult(method="augmenting", failures=failures)


def solve_greedy(array: LatinArray, seed: int = 0) -> AutoResult:
    graph = to_graph(array)
    candidate = greedy_rainbow(graph, seed)
    found = candidate if verify_rainbow_perfect(graph, candidate) else None
    return AutoResult(matching=found, method="greedy")
