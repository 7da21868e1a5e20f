import math
from typing import List, Optional, Tuple
import numpy as np
from ..configs.logger import logging
from ..matching import expansion_check, SubsetSearch
from ..models import (ColouredBipartiteGraph, Subpair, PipelineParams, ExpansionSpec, RobustPair, Deletion,
                      FailureReport, StageFailure)


def min_degree_bound(params: PipelineParams, d: float, initial_size: int,
                     min_deg_coef: Optional[float] = None) -> float:
    coef = params.min_deg_coef if min_deg_coef is None else min_deg_coef
    bound = coef * d * initial_size
    return max(bound, 1.0) if params.scaled else bound


def certify_robust_pair(graph: ColouredBipartiteGraph, pair: Subpair, d: float, bound: float,
                        params: PipelineParams, initial_size: Optional[int] = None,
                        provenance: Optional[List[Deletion]] = None, seed: int = 0) -> RobustPair:
    """Recompute the minimum degree and the min(2|S|, 2|A1|/3) expansion of `pair` inside `graph`."""
    sub = graph.restrict(pair.part_a, pair.part_b)
    spec = ExpansionSpec.for_core(len(pair.part_a))
    observed = sub.min_degree()
    holds, exact, violator = True, True, None
    for side in ("A", "B"):
        verdict = expansion_check(sub, side, spec, params.expansion_exact_limit, params.violator_restarts, seed)
        exact = exact and verdict.exact
        if not verdict.holds:
            holds, violator = False, verdict.violator
            break
    logging.info(f"[CERTIFY ROBUST PAIR] |A1|={len(pair.part_a)} min degree {observed} vs bound {bound:.4g}; "
                 f"expansion {'holds' if holds else 'violated'} ({'exact' if exact else 'heuristic'}).")
    return RobustPair(pair=pair.tagged("robust"), d=d, initial_size=initial_size or len(pair.part_a),
                      min_degree_bound=bound, observed_min_degree=observed, expansion=spec,
                      expansion_holds=holds, expansion_exact=exact, violator=violator,
                      provenance=provenance or [])


class RobustPairPruner:
    """
    Deletion process turning a dense pair into a robustly matchable one.

    Type (i) deletes a vertex of in-pair degree at most the bound; type (ii)
    deletes a set S with |S| < eps|A'| and |N(S)| <= 2|S|. Every deletion is
    followed by deleting as many lowest-index vertices from the other side.
    """

    def __init__(self, graph: ColouredBipartiteGraph, subpair: Subpair, d: float, params: PipelineParams,
                 min_deg_coef: Optional[float] = None, seed: int = 0):
        self.graph = graph
        self.params = params
        self.d = d
        self.seed = seed
        self.part_a = sorted(subpair.part_a)
        self.part_b = sorted(subpair.part_b)
        self.initial_size = len(self.part_a)
        self.bound = min_degree_bound(params, d, self.initial_size, min_deg_coef)
        self.set_limit = math.ceil(params.epsilon * self.initial_size) - 1
        self.deletion_limit = 2 * params.epsilon * self.initial_size
        self.deleted = 0
        self.provenance: List[Deletion] = []

    def _check_balanced(self):
        if len(self.part_a) != len(self.part_b):
            raise ValueError(f"[PRUNE TO ROBUST] Pair must be balanced, got {len(self.part_a)}x{len(self.part_b)}.")

    def _low_degree(self) -> Optional[Tuple[str, List[int]]]:
        block = self.graph.present[np.ix_(self.part_a, self.part_b)]
        for side, vertices, degrees in (("A", self.part_a, block.sum(axis=1)), ("B", self.part_b, block.sum(axis=0))):
            low = np.flatnonzero(degrees <= self.bound)
            if low.size:
                return side, [vertices[int(low[0])]]
        return None

    def _poor_expander(self) -> Optional[Tuple[str, List[int]]]:
        if self.set_limit < 1:
            return None
        sub = self.graph.restrict(self.part_a, self.part_b)
        rng = np.random.default_rng(self.seed + len(self.provenance))
        for side in ("A", "B"):
            labels, _, block = sub.side_matrix(side)
            search = SubsetSearch(block, labels, lambda size: 2 * size + 1)
            if search.size <= self.params.expansion_exact_limit:
                found = search.exact(self.set_limit)
            else:
                found = search.local_search(self.set_limit, self.params.violator_restarts, rng)
            if found is not None:
                return side, found
        return None

    def _delete(self, kind: str, side: str, vertices: List[int]) -> None:
        own, other = (self.part_a, self.part_b) if side == "A" else (self.part_b, self.part_a)
        gone = set(vertices)
        own[:] = [v for v in own if v not in gone]
        rebalance = other[:len(vertices)]
        other[:] = other[len(vertices):]
        self.provenance.append(Deletion(kind=kind, side=side, vertices=sorted(vertices)))
        self.provenance.append(Deletion(kind="rebalance", side="B" if side == "A" else "A", vertices=rebalance))
        self.deleted += len(vertices)
        logging.debug(f"[PRUNE TO ROBUST] {kind} deletion of {len(vertices)} {side}-vertices, "
                      f"{self.deleted} deleted per side.")

    def prune(self) -> RobustPair:
        self._check_balanced()
        while self.part_a:
            step = self._low_degree()
            kind = "degree"
            if step is None:
                step, kind = self._poor_expander(), "expansion"
            if step is None:
                break
            self._delete(kind, *step)
            if self.deleted >= self.deletion_limit:
                raise StageFailure(FailureReport(
                    stage="prune_to_robust", inequality="deleted per side < 2 * eps * |A'|",
                    lhs=self.deleted, rhs=self.deletion_limit, slack=self.deletion_limit - self.deleted,
                    message=f"Deleted {self.deleted} of {self.initial_size} vertices per side.",
                    details={"provenance": [entry.model_dump() for entry in self.provenance]}))
        pair = Subpair(part_a=frozenset(self.part_a), part_b=frozenset(self.part_b))
        robust = certify_robust_pair(self.graph, pair, self.d, self.bound, self.params, self.initial_size,
                                     self.provenance, self.seed)
        if not robust.certified:
            raise StageFailure(FailureReport(
                stage="prune_to_robust", inequality="min degree > bound and |N(S)| >= min(2|S|, 2|A1|/3)",
                lhs=robust.observed_min_degree, rhs=robust.min_degree_bound,
                slack=robust.observed_min_degree - robust.min_degree_bound,
                message="Pruned pair failed post-hoc certification.",
                details={"violator": robust.violator, "size": robust.size}))
        return robust


def prune_to_robust(graph: ColouredBipartiteGraph, subpair: Subpair, d: float, params: PipelineParams,
                    min_deg_coef: Optional[float] = None, seed: int = 0) -> RobustPair:
    return RobustPairPruner(graph, subpair, d, params, min_deg_coef, seed).prune()
