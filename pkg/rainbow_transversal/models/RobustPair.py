from typing import List, Literal, Optional
from pydantic import BaseModel
from .PipelineParams import ExpansionSpec
from .Subpair import Subpair


class Deletion(BaseModel):
    kind: Literal["degree", "expansion", "rebalance"]
    side: Literal["A", "B"]
    vertices: List[int]


class RobustPair(BaseModel):
    """
    Balanced pair (A1, B1) left after the deletion process, with bounds
    recomputed on the final pair rather than trusted from the run.
    """
    pair: Subpair
    d: float
    initial_size: int
    min_degree_bound: float
    observed_min_degree: int
    expansion: ExpansionSpec
    expansion_holds: bool
    expansion_exact: bool
    violator: Optional[List[int]] = None
    provenance: List[Deletion] = []

    @property
    def size(self) -> int:
        return len(self.pair.part_a)

    @property
    def certified(self) -> bool:
        return self.observed_min_degree > self.min_degree_bound and self.expansion_holds


class PairFile(BaseModel):
    """On-disk form of a robust pair: the vertex sets plus the seed of the subgraph they were certified on."""
    part_a: List[int]
    part_b: List[int]
    edge_seed: int
    min_degree_bound: float
