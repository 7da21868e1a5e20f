from typing import Dict, List, Sequence, Tuple
import numpy as np
from ..configs.logger import logging
from ..core.core import SeedLike, as_generator
from ..matching import max_matching, hall_violator
from ..models import (ColouredBipartiteGraph, RainbowMatching, Subpair, TrimmedCore, StageThresholds,
                      FailureReport, StageFailure, InequalityCheck, NO_EDGE)


def _colour_mask(matrix: np.ndarray, colours: Sequence[int]) -> np.ndarray:
    return np.isin(matrix, np.asarray(list(colours), dtype=np.int64)) & (matrix != NO_EDGE)


def trim_core(g1: ColouredBipartiteGraph, m2: RainbowMatching, thresholds: StageThresholds) -> TrimmedCore:
    """
    Drop M2-coloured edges from G1, then remove `trim_count` vertices per side,
    heaviest losers first (loss above the threshold), padded with the lowest
    indices. Raises StageFailure when the trimmed core is below its degree bound.
    """
    cleaned = g1.drop_colours(m2.colours())
    loss_a = g1.degrees_a() - cleaned.degrees_a()
    loss_b = g1.degrees_b() - cleaned.degrees_b()
    count = thresholds.trim_count

    def pick(vertices: List[int], loss: np.ndarray) -> Tuple[List[int], int]:
        heavy = sorted((v for v in vertices if loss[v] > thresholds.trim_loss_threshold), key=lambda v: (-loss[v], v))
        chosen = heavy[:count]
        taken = set(chosen)
        chosen += [v for v in vertices if v not in taken][:count - len(chosen)]
        return sorted(chosen), len(heavy)

    removed_a, heavy_a = pick(g1.rows, loss_a)
    removed_b, heavy_b = pick(g1.cols, loss_b)
    trimmed = cleaned.remove_vertices(removed_a, removed_b)
    pair = Subpair(part_a=frozenset(trimmed.rows), part_b=frozenset(trimmed.cols), role="trimmed core")
    min_degree = trimmed.min_degree()
    logging.info(f"[TRIM CORE] Removed {len(removed_a)}+{len(removed_b)} vertices ({heavy_a}/{heavy_b} heavy losers); "
                 f"min degree {min_degree} vs {thresholds.trimmed_min_degree:.4g}.")
    if min_degree < thresholds.trimmed_min_degree:
        raise StageFailure(FailureReport(
            stage="trim_core", inequality="min degree of G'1 >= (minDegCoef - 2 trimCoef) d |A1|",
            lhs=min_degree, rhs=thresholds.trimmed_min_degree, slack=min_degree - thresholds.trimmed_min_degree,
            message=f"Trimmed core has minimum degree {min_degree}.",
            details={"heavy_a": heavy_a, "heavy_b": heavy_b, "trim_count": count}))
    return TrimmedCore(pair=pair, graph=trimmed, removed_a=removed_a, removed_b=removed_b,
                       heavy_a=heavy_a, heavy_b=heavy_b, min_degree=min_degree)


def classify_hard_leftovers(full_graph: ColouredBipartiteGraph, a0: Sequence[int], b0: Sequence[int],
                            trimmed_core: Subpair, m2: RainbowMatching) -> Subpair:
    """Leftovers with at least half of their edges into the trimmed core in M2 colours."""
    mask = _colour_mask(full_graph.colour_matrix, m2.colours())
    core_a, core_b = trimmed_core.sorted_a(), trimmed_core.sorted_b()
    a0, b0 = sorted(a0), sorted(b0)
    hard_a = [a for a, count in zip(a0, mask[np.ix_(a0, core_b)].sum(axis=1)) if core_b and count >= len(core_b) / 2]
    hard_b = [b for b, count in zip(b0, mask[np.ix_(core_a, b0)].sum(axis=0)) if core_a and count >= len(core_a) / 2]
    return Subpair(part_a=frozenset(hard_a), part_b=frozenset(hard_b), role="hard leftovers")


class GreedyCompletion:
    """
    Match every leftover vertex into the trimmed core with a fresh colour.

    Hard leftovers go first and may only use reserved-colour edges; the others use
    any edge of G whose colour is unused by M2 and earlier choices.
    """

    def __init__(self, gr: ColouredBipartiteGraph, full_graph: ColouredBipartiteGraph, a0: Sequence[int],
                 b0: Sequence[int], hard: Subpair, core: Subpair, m2: RainbowMatching, seed: SeedLike):
        self.gr = gr
        self.full_graph = full_graph
        self.a0, self.b0 = sorted(a0), sorted(b0)
        self.hard = hard
        self.core_a, self.core_b = core.sorted_a(), core.sorted_b()
        self.rng = as_generator(seed)
        self.used_colours = set(m2.colours())
        self.used_core: Dict[str, set] = {"A": set(), "B": set()}
        self.edges: List[Tuple[int, int, int]] = []

    def _order(self, vertices: List[Tuple[str, int]]) -> List[Tuple[str, int]]:
        return [vertices[i] for i in self.rng.permutation(len(vertices))] if vertices else []

    def _match(self, side: str, vertex: int, graph: ColouredBipartiteGraph, phase: str) -> None:
        matrix = graph.colour_matrix
        partners = self.core_b if side == "A" else self.core_a
        taken = self.used_core["B" if side == "A" else "A"]
        census = {"options": 0, "partner used": 0, "colour used": 0}
        for partner in partners:
            colour = int(matrix[vertex, partner] if side == "A" else matrix[partner, vertex])
            if colour == NO_EDGE:
                continue
            census["options"] += 1
            if partner in taken:
                census["partner used"] += 1
                continue
            if colour in self.used_colours:
                census["colour used"] += 1
                continue
            taken.add(partner)
            self.used_colours.add(colour)
            self.edges.append((vertex, partner, colour) if side == "A" else (partner, vertex, colour))
            return
        raise StageFailure(FailureReport(
            stage="greedy_m0", inequality="available choices > forbidden choices",
            lhs=census["options"] - census["partner used"] - census["colour used"],
            rhs=0, slack=census["options"] - census["partner used"] - census["colour used"],
            message=f"Leftover {side}-vertex {vertex} has no admissible edge in the {phase} phase.",
            details={"vertex": vertex, "side": side, "phase": phase, **census}))

    def run(self) -> RainbowMatching:
        hard = self._order([("A", a) for a in sorted(self.hard.part_a)] + [("B", b) for b in sorted(self.hard.part_b)])
        for side, vertex in hard:
            self._match(side, vertex, self.gr, "reserved")
        rest = [("A", a) for a in self.a0 if a not in self.hard.part_a] + \
               [("B", b) for b in self.b0 if b not in self.hard.part_b]
        for side, vertex in self._order(rest):
            self._match(side, vertex, self.full_graph, "unreserved")
        m0 = RainbowMatching.from_tuples(self.edges).checked(self.full_graph, "GREEDY M0")
        logging.info(f"[GREEDY M0] Matched {len(hard)} hard and {len(rest)} other leftovers.")
        return m0


def greedy_m0(gr: ColouredBipartiteGraph, full_graph: ColouredBipartiteGraph, a0: Sequence[int], b0: Sequence[int],
              hard: Subpair, core: Subpair, m2: RainbowMatching, seed: SeedLike) -> RainbowMatching:
    return GreedyCompletion(gr, full_graph, a0, b0, hard, core, m2, seed).run()


def final_core(trimmed: TrimmedCore, m0: RainbowMatching) -> ColouredBipartiteGraph:
    """G3: the trimmed core without M0's vertices and without edges sharing a colour with M0."""
    return trimmed.graph.remove_vertices(m0.rows(), m0.cols()).drop_colours(m0.colours())


def finish_checks(trimmed: TrimmedCore, m0: RainbowMatching, a0_count: int,
                  thresholds: StageThresholds) -> List[InequalityCheck]:
    """Minimum degree of G3 and the size identity |A3| = |A'1| - |A0|."""
    g3 = final_core(trimmed, m0)
    min_degree = g3.min_degree() if g3.rows else 0
    return [InequalityCheck.at_least("min degree of G3", min_degree, thresholds.final_min_degree),
            InequalityCheck.equal("|A3| = |A'1| - |A0|", len(g3.rows), len(trimmed.pair.part_a) - a0_count)]


def finish_m3(trimmed: TrimmedCore, m0: RainbowMatching, thresholds: StageThresholds) -> RainbowMatching:
    g3 = final_core(trimmed, m0)
    size_a, size_b = len(g3.rows), len(g3.cols)
    min_degree = g3.min_degree() if size_a else 0
    if min_degree < thresholds.final_min_degree:
        logging.warning(f"[FINISH M3] G3 minimum degree {min_degree} below {thresholds.final_min_degree:.4g}.")
    if size_a != size_b:
        raise StageFailure(FailureReport(
            stage="finish_m3", inequality="|A3| = |B3|", lhs=size_a, rhs=size_b, slack=size_a - size_b,
            message=f"Final core is unbalanced: {size_a}x{size_b}."))
    pairs = max_matching(g3)
    if len(pairs) < size_a:
        violator = hall_violator(g3, "A")
        raise StageFailure(FailureReport(
            stage="finish_m3", inequality="|N(S)| >= |S| for all S in A3", lhs=len(pairs), rhs=size_a,
            slack=len(pairs) - size_a, message=f"G3 has no perfect matching ({len(pairs)} of {size_a}).",
            details={"violator": violator}))
    matrix = g3.colour_matrix
    m3 = RainbowMatching.from_tuples([(a, b, int(matrix[a, b])) for a, b in pairs]).checked(g3, "FINISH M3")
    logging.info(f"[FINISH M3] Perfect matching of G3 with {m3.size} edges (min degree {min_degree}).")
    return m3
