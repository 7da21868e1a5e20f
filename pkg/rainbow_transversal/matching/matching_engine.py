from collections import deque
from typing import Dict, List, Mapping, Optional, Sequence, Tuple
import numpy as np
from ..configs.logger import logging
from ..models import ColouredBipartiteGraph, ExpansionSpec, ExpansionVerdict, MatchingVerificationError
from .subset_search import SubsetSearch


class HopcroftKarp:
    """
    Maximum-cardinality bipartite matching by phases of shortest augmenting paths.

    `adjacency` maps each left vertex to its right neighbours. Left vertices and
    neighbours are tried in increasing order, so the result is deterministic.
    """

    def __init__(self, adjacency: Mapping[int, Sequence[int]]):
        self.adjacency: Dict[int, List[int]] = {u: sorted(vs) for u, vs in sorted(adjacency.items())}
        self.match_left: Dict[int, int] = {}
        self.match_right: Dict[int, int] = {}
        self.dist: Dict[int, int] = {}
        self._dead = len(self.adjacency) + 1

    def _layer(self) -> bool:
        self.dist = {}
        queue = deque()
        for u in self.adjacency:
            if u not in self.match_left:
                self.dist[u] = 0
                queue.append(u)
        found = False
        while queue:
            u = queue.popleft()
            for v in self.adjacency[u]:
                w = self.match_right.get(v)
                if w is None:
                    found = True
                elif w not in self.dist:
                    self.dist[w] = self.dist[u] + 1
                    queue.append(w)
        return found

    def _augment(self, root: int) -> bool:
        stack = [(root, iter(self.adjacency[root]))]
        path: List[int] = []
        while stack:
            u, neighbours = stack[-1]
            advanced = False
            for v in neighbours:
                w = self.match_right.get(v)
                if w is None:
                    path.append(v)
                    for (x, _), y in zip(stack, path):
                        self.match_left[x] = y
                        self.match_right[y] = x
                    return True
                if self.dist.get(w) == self.dist[u] + 1:
                    path.append(v)
                    stack.append((w, iter(self.adjacency[w])))
                    advanced = True
                    break
            if not advanced:
                self.dist[u] = self._dead
                stack.pop()
                if path:
                    path.pop()
        return False

    def __call__(self) -> List[Tuple[int, int]]:
        self.match_left, self.match_right = {}, {}
        while self._layer():
            for u in self.adjacency:
                if u not in self.match_left:
                    self._augment(u)
        return sorted(self.match_left.items())


def _oriented(graph: ColouredBipartiteGraph, side: str) -> Dict[int, List[int]]:
    if side not in ("A", "B"):
        raise ValueError(f"[MATCHING ENGINE] Side must be 'A' or 'B', got {side!r}.")
    if side == "A":
        return {a: graph.adjacency_a()[a] for a in graph.rows}
    return {b: graph.adjacency_b()[b] for b in graph.cols}


def max_matching(graph: ColouredBipartiteGraph) -> List[Tuple[int, int]]:
    """Maximum matching of the uncoloured graph as sorted (a, b) pairs."""
    return HopcroftKarp(_oriented(graph, "A"))()


def hall_violator(graph: ColouredBipartiteGraph, side: str = "A") -> Optional[List[int]]:
    """
    None when a matching saturates `side`; otherwise the set of `side` vertices
    alternating-reachable from the lowest unmatched one, which has |N(S)| < |S|.
    """
    adjacency = _oriented(graph, side)
    engine = HopcroftKarp(adjacency)
    engine()
    unmatched = [u for u in engine.adjacency if u not in engine.match_left]
    if not unmatched:
        return None
    reached, neighbourhood = {unmatched[0]}, set()
    queue = deque([unmatched[0]])
    while queue:
        u = queue.popleft()
        for v in adjacency[u]:
            if v in neighbourhood:
                continue
            neighbourhood.add(v)
            w = engine.match_right.get(v)
            if w is None:
                raise MatchingVerificationError("[HALL VIOLATOR] Augmenting path left after a maximum matching.")
            if w not in reached:
                reached.add(w)
                queue.append(w)
    real = set().union(*(adjacency[u] for u in reached))
    if len(real) >= len(reached):
        raise MatchingVerificationError(f"[HALL VIOLATOR] Set of size {len(reached)} has {len(real)} neighbours.")
    logging.debug(f"[HALL VIOLATOR] side={side} |S|={len(reached)} |N(S)|={len(real)}")
    return sorted(reached)


def expansion_check(graph: ColouredBipartiteGraph, side: str, spec: ExpansionSpec,
                    exact_limit: int = 24, restarts: int = 200, seed: int = 0) -> ExpansionVerdict:
    """
    Check |N(S)| >= min(factor * |S|, cap) for every nonempty S on `side`.

    Only sets of size up to ceil(cap / factor) are searched: a larger set contains
    one of that size, whose neighbourhood already reaches the cap.
    """
    if side not in ("A", "B"):
        raise ValueError(f"[EXPANSION CHECK] Side must be 'A' or 'B', got {side!r}.")
    labels, _, block = graph.side_matrix(side)
    search = SubsetSearch(block, labels, spec.bound)
    exact = search.size <= exact_limit
    if exact:
        violator = search.exact(spec.max_checked_size)
    else:
        violator = search.local_search(spec.max_checked_size, restarts, np.random.default_rng(seed))
    if violator is None:
        return ExpansionVerdict(holds=True, exact=exact, side=side)
    positions = [labels.index(v) for v in violator]
    reach = search.neighbourhood_size(positions)
    logging.debug(f"[EXPANSION CHECK] side={side} violator of size {len(violator)} reaches {reach}.")
    return ExpansionVerdict(holds=False, exact=exact, side=side, violator=violator,
                            neighbourhood_size=reach, bound=spec.bound(len(violator)))
