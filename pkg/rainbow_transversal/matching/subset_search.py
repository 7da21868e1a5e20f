import math
from typing import Callable, List, Optional, Sequence
import numpy as np


class SubsetSearch:
    """
    Search for a set S of side vertices with |N(S)| < bound(|S|).

    `block` is the boolean adjacency from the searched side (rows) to the other
    side (columns); `labels` maps row positions back to vertex ids. `bound` must
    be non-decreasing in |S|.
    """

    def __init__(self, block: np.ndarray, labels: Sequence[int], bound: Callable[[int], float]):
        self.block = np.asarray(block, dtype=bool)
        self.labels = list(labels)
        self.bound = bound
        self.masks = [int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")
                      for row in self.block]

    @property
    def size(self) -> int:
        return len(self.labels)

    def neighbourhood_size(self, positions: Sequence[int]) -> int:
        if not len(positions):
            return 0
        return int(self.block[list(positions)].any(axis=0).sum())

    def verified(self, positions: Sequence[int]) -> Optional[List[int]]:
        if positions and self.neighbourhood_size(positions) < self.bound(len(positions)):
            return sorted(self.labels[i] for i in positions)
        return None

    def exact(self, max_size: int) -> Optional[List[int]]:
        """Lexicographically first violator of size at most `max_size`, by depth-first enumeration."""
        max_size = min(max_size, self.size)
        if max_size < 1:
            return None
        ceiling = self.bound(max_size)
        chosen: List[int] = []

        def extend(start: int, mask: int) -> Optional[List[int]]:
            for i in range(start, self.size):
                union = mask | self.masks[i]
                reach = union.bit_count()
                chosen.append(i)
                if reach < self.bound(len(chosen)):
                    return list(chosen)
                # neighbourhoods only grow, so a union at the ceiling cannot lead to a violator
                if len(chosen) < max_size and reach < ceiling:
                    found = extend(i + 1, union)
                    if found is not None:
                        return found
                chosen.pop()
            return None

        found = extend(0, 0)
        return None if found is None else self.verified(found)

    def local_search(self, max_size: int, restarts: int, rng: np.random.Generator) -> Optional[List[int]]:
        """
        Steepest descent on |N(S)| - bound(|S|) over single-vertex flips, from
        `restarts` random starting sets. Returns the first verified violator.
        """
        max_size = min(max_size, self.size)
        if max_size < 1:
            return None
        adjacency = self.block.astype(np.int64)
        for _ in range(restarts):
            start_size = int(rng.integers(1, max_size + 1))
            members = np.zeros(self.size, dtype=bool)
            members[rng.choice(self.size, size=start_size, replace=False)] = True
            counts = members.astype(np.int64) @ adjacency
            while True:
                size = int(members.sum())
                reach = int((counts > 0).sum())
                score = reach - self.bound(size)
                if score < 0:
                    found = self.verified(np.flatnonzero(members).tolist())
                    if found is not None:
                        return found
                add_scores = np.full(self.size, math.inf)
                remove_scores = np.full(self.size, math.inf)
                if size < max_size:
                    gain = adjacency @ (counts == 0)
                    add_scores[~members] = reach + gain[~members] - self.bound(size + 1)
                if size > 1:
                    loss = adjacency @ (counts == 1)
                    remove_scores[members] = reach - loss[members] - self.bound(size - 1)
                best_add, best_remove = int(np.argmin(add_scores)), int(np.argmin(remove_scores))
                if add_scores[best_add] <= remove_scores[best_remove]:
                    vertex, best, sign = best_add, add_scores[best_add], 1
                else:
                    vertex, best, sign = best_remove, remove_scores[best_remove], -1
                if not best < score:
                    break
                members[vertex] = sign > 0
                counts += sign * adjacency[vertex]
        return None
