from typing import Iterable, List, Tuple
from pydantic import BaseModel, ConfigDict
from .ColouredGraph import ColouredBipartiteGraph


class MatchedEdge(BaseModel):
    model_config = ConfigDict(frozen=True)

    row: int
    col: int
    colour: int

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.row, self.col, self.colour)


class MatchingVerificationError(AssertionError):
    """A matching produced by this package failed its own re-verification."""


class RainbowMatching(BaseModel):
    """
    Edge list claimed to be vertex- and colour-disjoint.

    The model itself is permissive so that candidate matchings read from
    files can be rejected by `verify_rainbow_perfect` instead of failing to
    load; `is_rainbow` checks the invariants.
    """
    model_config = ConfigDict(frozen=True)

    edges: List[MatchedEdge] = []

    @classmethod
    def from_tuples(cls, edges: Iterable[Tuple[int, int, int]]) -> "RainbowMatching":
        return cls(edges=[MatchedEdge(row=a, col=b, colour=c) for a, b, c in sorted(edges)])

    @property
    def size(self) -> int:
        return len(self.edges)

    def rows(self) -> List[int]:
        return [e.row for e in self.edges]

    def cols(self) -> List[int]:
        return [e.col for e in self.edges]

    def colours(self) -> List[int]:
        return [e.colour for e in self.edges]

    def tuples(self) -> List[Tuple[int, int, int]]:
        return [e.as_tuple() for e in self.edges]

    def is_rainbow(self) -> bool:
        n = len(self.edges)
        return len(set(self.rows())) == n and len(set(self.cols())) == n and len(set(self.colours())) == n

    def lies_in(self, graph: ColouredBipartiteGraph) -> bool:
        return all(graph.has_edge(e.row, e.col, e.colour) for e in self.edges)

    def union(self, *others: "RainbowMatching") -> "RainbowMatching":
        edges = self.tuples()
        for other in others:
            edges.extend(other.tuples())
        return RainbowMatching.from_tuples(edges)

    def checked(self, graph: ColouredBipartiteGraph, stage: str) -> "RainbowMatching":
        """Return self after re-verifying the rainbow invariants against `graph`."""
        if not self.is_rainbow():
            raise MatchingVerificationError(f"[{stage}] Produced matching is not rainbow: {self.tuples()}")
        if not self.lies_in(graph):
            raise MatchingVerificationError(f"[{stage}] Produced matching uses an edge outside the graph.")
        return self
