import math
from typing import Dict, List, Optional, Sequence, Set, Tuple
import numpy as np
from ..configs.logger import logging
from ..core.core import SeedLike, as_generator
from ..models import (ColouredBipartiteGraph, RainbowMatching, MatchedEdge, ReachState, ReachStep,
                      AugmentationRecord, PipelineParams, StageThresholds, FailureReport, StageFailure,
                      MatchingVerificationError, NO_EDGE)

Edge = Tuple[int, int, int]


def greedy_rainbow(graph: ColouredBipartiteGraph, seed: SeedLike) -> RainbowMatching:
    """Maximal rainbow matching: rows in seeded order, each takes its lowest admissible column."""
    rng = as_generator(seed)
    matrix = graph.colour_matrix
    used_cols: Set[int] = set()
    used_colours: Set[int] = set()
    edges: List[Edge] = []
    for row in rng.permutation(graph.rows).tolist() if graph.rows else []:
        for col in graph.adjacency_a()[row]:
            colour = int(matrix[row, col])
            if col in used_cols or colour in used_colours:
                continue
            edges.append((row, col, colour))
            used_cols.add(col)
            used_colours.add(colour)
            break
    return RainbowMatching.from_tuples(edges).checked(graph, "GREEDY RAINBOW")


def _pool_counts(matrix: np.ndarray, leftovers: Sequence[int], ends: Sequence[int], axis_rows: bool,
                 in_pool: np.ndarray) -> np.ndarray:
    """Per matching edge, the number of pool-coloured edges from its endpoint `ends[i]` to `leftovers`."""
    if not leftovers or not ends:
        return np.zeros(len(ends), dtype=np.int64)
    block = matrix[np.ix_(leftovers, ends)] if axis_rows else matrix[np.ix_(ends, leftovers)].T
    valid = block >= 0
    return (valid & in_pool[np.where(valid, block, 0)]).sum(axis=0)


def build_reach(g_star: ColouredBipartiteGraph, m2: RainbowMatching, a0: Sequence[int], b0: Sequence[int],
                threshold: float, step_cap: int) -> ReachState:
    """
    Grow R^A and R^B over the edges uv of M2 (u in A2, v in B2).

    In the A-phase of step i an edge joins R^A when at least `threshold` edges of G*
    from v to A0 have a colour in C; the B-phase does the same from u to B0. New
    members add their colours to C with the phase as timestamp. Each set only
    excludes its own members, so an edge may sit in both. Stops when the two
    sets meet, when a whole step adds nothing, or after `step_cap` steps.
    """
    a0, b0 = sorted(a0), sorted(b0)
    matrix = g_star.colour_matrix
    edges = m2.tuples()
    rows = [e[0] for e in edges]
    cols = [e[1] for e in edges]
    m2_colours = frozenset(e[2] for e in edges)
    top = int(max(matrix.max(initial=NO_EDGE), max(m2_colours, default=NO_EDGE))) + 1
    in_pool = np.ones(max(top, 1), dtype=bool)
    in_pool[list(m2_colours)] = False

    state = ReachState(m2_colours=m2_colours, leftovers_a=a0, leftovers_b=b0, threshold=threshold)
    for step in range(1, step_cap + 1):
        record = ReachStep(step=step)
        for phase, side in ((2 * step - 1, "A"), (2 * step, "B")):
            members = state.r_a if side == "A" else state.r_b
            if side == "A":
                counts = _pool_counts(matrix, a0, cols, True, in_pool)
            else:
                counts = _pool_counts(matrix, b0, rows, False, in_pool)
            joined = [i for i, count in enumerate(counts) if count >= threshold and rows[i] not in members]
            for i in joined:
                members[rows[i]] = phase
                colour = edges[i][2]
                if colour not in state.colour_pool:
                    state.colour_pool[colour] = phase
                    in_pool[colour] = True
            added = [rows[i] for i in joined]
            added_colours = [edges[i][2] for i in joined]
            if side == "A":
                record.added_a, record.colours_a = added, added_colours
            else:
                record.added_b, record.colours_b = added, added_colours
            common = sorted(set(state.r_a) & set(state.r_b))
            if common:
                row = common[0]
                col, colour = next((e[1], e[2]) for e in edges if e[0] == row)
                state.intersection = MatchedEdge(row=row, col=col, colour=colour)
                state.terminated_with = "intersection"
                break
        state.step_log.append(record)
        state.steps = step
        if state.intersection is not None:
            break
        if not (record.added_a or record.added_b):
            state.terminated_with = "stalled"
            break
    else:
        state.terminated_with = "step cap"
    logging.debug(f"[BUILD REACH] {state.terminated_with} after {state.steps} steps: "
                  f"|R^A|={len(state.r_a)} |R^B|={len(state.r_b)} threshold={threshold:.3g}")
    return state


class TraceBack:
    """
    Turn an intersection edge ab of R^A and R^B into a rainbow matching one larger than M2.

    ab is replaced by a0b and ab0 whose colours entered C before ab joined R^A and
    R^B respectively. A new edge is active while its colour is still used by a
    surviving M2 edge; that edge is then swapped for an edge into A0 (or B0) whose
    colour entered C strictly before it, so the chain ends.
    """

    def __init__(self, g_star: ColouredBipartiteGraph, m2: RainbowMatching, reach: ReachState,
                 step_cap: Optional[int] = None):
        self.g_star = g_star
        self.m2 = m2
        self.reach = reach
        self.step_cap = step_cap
        self.matrix = g_star.colour_matrix
        self.steps = 0
        self.used_a0: Set[int] = set()
        self.used_b0: Set[int] = set()
        self.new_edges: List[Edge] = []

    def _check_reach(self):
        if self.reach.terminated_with != "intersection" or self.reach.intersection is None:
            raise ValueError(f"[TRACE BACK] Reach iteration ended with '{self.reach.terminated_with}', "
                             f"not an intersection edge.")

    def _fail(self, message: str, **details) -> StageFailure:
        return StageFailure(FailureReport(stage="trace_back", inequality="earlier-coloured edge with fresh endpoint",
                                          message=message, details=details))

    def _new_colours(self) -> Set[int]:
        return {e[2] for e in self.new_edges}

    def _into_a0(self, col: int, phase: int) -> Edge:
        taken = self._new_colours()
        for a0 in self.reach.leftovers_a:
            colour = int(self.matrix[a0, col])
            if (colour != NO_EDGE and a0 not in self.used_a0 and colour not in taken
                    and self.reach.earlier_than(colour, phase)):
                self.used_a0.add(a0)
                return (a0, col, colour)
        raise self._fail(f"No edge from column {col} to A0 with a colour earlier than phase {phase}.",
                         col=col, phase=phase)

    def _into_b0(self, row: int, phase: int) -> Edge:
        taken = self._new_colours()
        for b0 in self.reach.leftovers_b:
            colour = int(self.matrix[row, b0])
            if (colour != NO_EDGE and b0 not in self.used_b0 and colour not in taken
                    and self.reach.earlier_than(colour, phase)):
                self.used_b0.add(b0)
                return (row, b0, colour)
        raise self._fail(f"No edge from row {row} to B0 with a colour earlier than phase {phase}.",
                         row=row, phase=phase)

    def run(self) -> RainbowMatching:
        self._check_reach()
        ab = self.reach.intersection
        surviving: Dict[int, Edge] = {e[2]: e for e in self.m2.tuples() if e[0] != ab.row}
        self.new_edges.append(self._into_a0(ab.col, self.reach.r_a[ab.row]))
        self.new_edges.append(self._into_b0(ab.row, self.reach.r_b[ab.row]))
        while True:
            active = sorted(e for e in self.new_edges if e[2] in surviving)
            if not active:
                break
            self.steps += 1
            if self.step_cap is not None and self.steps > self.step_cap:
                raise self._fail(f"Replacement steps exceeded the cap {self.step_cap}.", steps=self.steps)
            row, col, colour = surviving.pop(active[0][2])
            phase_a, phase_b = self.reach.r_a.get(row), self.reach.r_b.get(row)
            if phase_a is None and phase_b is None:
                raise MatchingVerificationError(f"[TRACE BACK] Active colour {colour} belongs to an edge outside R^A u R^B.")
            # swap on the side through which the edge first joined, so the new colour is strictly earlier
            if phase_b is None or (phase_a is not None and phase_a < phase_b):
                self.new_edges.append(self._into_a0(col, phase_a))
            else:
                self.new_edges.append(self._into_b0(row, phase_b))
        result = RainbowMatching.from_tuples(list(surviving.values()) + self.new_edges)
        result.checked(self.g_star, "TRACE BACK")
        if result.size != self.m2.size + 1:
            raise MatchingVerificationError(f"[TRACE BACK] Produced size {result.size}, expected {self.m2.size + 1}.")
        return result


def trace_back(g_star: ColouredBipartiteGraph, m2: RainbowMatching, reach: ReachState,
               step_cap: Optional[int] = None) -> RainbowMatching:
    return TraceBack(g_star, m2, reach, step_cap).run()


def size_benchmark(min_degree: int) -> float:
    return min_degree - 2 * min_degree ** (2 / 3)


class AugmentingRainbow:
    """
    Rainbow matching grown by reach/trace-back augmentations until none applies.

    Starts from `start` when given, otherwise from a seeded greedy matching.
    """

    def __init__(self, g_star: ColouredBipartiteGraph, seed: SeedLike, params: Optional[PipelineParams] = None,
                 thresholds: Optional[StageThresholds] = None, start: Optional[RainbowMatching] = None):
        self.g_star = g_star
        self.seed = seed
        self.start = start
        self.params = params or PipelineParams()
        if thresholds is None:
            size = max(len(g_star.rows), 1)
            thresholds = self.params.thresholds(max(g_star.size_a, 2), 1.0, size)
        self.thresholds = thresholds
        self.records: List[AugmentationRecord] = []
        self.failures: List[FailureReport] = []

    def _schedule(self) -> List[float]:
        threshold = self.thresholds.reach_threshold
        schedule = [threshold]
        if self.params.reach_relaxation:
            while threshold > 1:
                threshold = max(1.0, math.floor(threshold / 2))
                schedule.append(threshold)
        return schedule

    def _augment(self, matching: RainbowMatching) -> Optional[RainbowMatching]:
        covered_a, covered_b = set(matching.rows()), set(matching.cols())
        a0 = [a for a in self.g_star.rows if a not in covered_a]
        b0 = [b for b in self.g_star.cols if b not in covered_b]
        if not a0 or not b0:
            return None
        for threshold in self._schedule():
            reach = build_reach(self.g_star, matching, a0, b0, threshold, self.thresholds.reach_step_cap)
            if reach.terminated_with != "intersection":
                continue
            engine = TraceBack(self.g_star, matching, reach, self.thresholds.trace_step_cap)
            try:
                grown = engine.run()
            except StageFailure as e:
                self.failures.append(e.report)
                logging.debug(f"[AUGMENTING RAINBOW] Trace-back failed at threshold {threshold}: {e}")
                continue
            self.records.append(AugmentationRecord(input_size=matching.size, output_size=grown.size,
                                                   threshold=threshold, reach_steps=reach.steps,
                                                   replacement_steps=engine.steps))
            return grown
        return None

    def run(self) -> RainbowMatching:
        if self.start is not None:
            if not (self.start.is_rainbow() and self.start.lies_in(self.g_star)):
                raise ValueError("[AUGMENTING RAINBOW] Start matching is not a rainbow matching of G*.")
            matching = self.start
        else:
            matching = greedy_rainbow(self.g_star, self.seed)
        start = matching.size
        while True:
            grown = self._augment(matching)
            if grown is None:
                break
            matching = grown
        delta = self.g_star.min_degree()
        benchmark = size_benchmark(delta)
        logging.info(f"[AUGMENTING RAINBOW] start {start} -> {matching.size} after {len(self.records)} "
                     f"augmentations; benchmark delta - 2 delta^(2/3) = {benchmark:.2f} (delta={delta}).")
        return matching


def augmenting_rainbow(g_star: ColouredBipartiteGraph, seed: SeedLike, params: Optional[PipelineParams] = None,
                       thresholds: Optional[StageThresholds] = None,
                       start: Optional[RainbowMatching] = None) -> RainbowMatching:
    return AugmentingRainbow(g_star, seed, params, thresholds, start).run()
